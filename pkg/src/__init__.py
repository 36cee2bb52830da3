from .api import LoggingProvider
from . import seqcore, blockcount, numtheory, generators, expcli
