from loguru import logger

__title__ = "cyberemergence"
__version__ = "0.1.0"
__author__ = "Bui Dinh An"

# Library modules log through loguru; applications opt in with
# logger.enable("cyberemergence").
logger.disable(__title__)
