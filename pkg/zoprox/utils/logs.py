import logging

import colorama
from termcolor import colored

_colours = {
    logging.DEBUG: "blue",
    logging.INFO: "green",
    logging.WARNING: "yellow",
    logging.ERROR: "red",
    logging.CRITICAL: "red",
}


class ColoredFormatter(logging.Formatter):

    def format(self, record: logging.LogRecord) -> str:
        message = super().format(record)
        colour = _colours.get(record.levelno)
        if colour is None:
            return message
        return colored(message, colour)


def setup_logging(verbose: bool = False):
    """Install the coloured handler on the root logger. Only the CLI calls this."""
    colorama.init(autoreset=True)
    handler = logging.StreamHandler()
    handler.setFormatter(ColoredFormatter("%(levelname)s %(name)s: %(message)s"))
    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(logging.DEBUG if verbose else logging.INFO)
