import asyncio
import sys
from typing import List

from dotenv import load_dotenv

from src.expcli import CliService
from src.utils import logging_provider


async def main(argv: List[str]) -> int:
    service = CliService(logging_provider=logging_provider)
    return await service.run(argv)


if __name__ == "__main__":
    load_dotenv()
    sys.exit(asyncio.run(main(sys.argv[1:])))
