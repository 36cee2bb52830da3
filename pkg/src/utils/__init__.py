from .convert import asdict, to_text
from .dict_helper import drop_undefined, drop_except_keys, overlay
from .logging import logging_provider
