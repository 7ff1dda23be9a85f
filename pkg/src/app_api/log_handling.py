import logging
from itertools import cycle

from rich.console import Console
from rich.markup import escape

from src.app_api import utils


MAIN_LOG_FP = utils.get_repo_root() / "src" / "app_api" / "AppData" / "app.log"

LEVELS = [logging.ERROR, logging.WARNING, logging.INFO, logging.DEBUG]


logger = logging.getLogger("knotforge_logger")


def setup_logging(verbosity: int = 2, log_file: bool = True) -> logging.Logger:
    """
    Configures "knotforge_logger": everything goes to AppData/app.log, and the console shows
    messages at the level picked by `verbosity` (0 = errors only .. 3 = debug). Calling it
    again only adjusts the console level.
    """
    level = LEVELS[max(0, min(verbosity, len(LEVELS) - 1))]
    file_format = "%(asctime)s - %(module)s - %(levelname)s: %(message)s"

    # tag every record with the module it came from so the console can color by origin
    old_factory = logging.getLogRecordFactory()
    if not getattr(old_factory, "_knotforge", False):

        def record_factory(*args, **kwargs):
            record = old_factory(*args, **kwargs)
            record.origin = record.module
            return record

        record_factory._knotforge = True  # type: ignore[attr-defined]
        logging.setLogRecordFactory(record_factory)

    logger = logging.getLogger("knotforge_logger")
    logger.setLevel(logging.DEBUG)

    for handler in logger.handlers:
        if isinstance(handler, ConsoleHandler):
            handler.setLevel(level)
            return logger

    if log_file:
        file_handler = logging.FileHandler(MAIN_LOG_FP.expanduser())
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(logging.Formatter(file_format))
        logger.addHandler(file_handler)

    console_handler = ConsoleHandler()
    console_handler.setFormatter(ColorByOriginFormatter())
    console_handler.setLevel(level)
    logger.addHandler(console_handler)

    return logger


class ColorByOriginFormatter(logging.Formatter):
    """
    Console formatter: each emitting module gets the next color pair from COLORS the first
    time it logs, and keeps it for the rest of the run.
    """
    COLORS: list[tuple[str, str]] = [
        ("orange_red1", "indian_red1"),
        ("cyan1", "cyan2"),
        ("plum2", "thistle3"),
        ("chartreuse3", "sea_green3"),
        ("gold1", "tan")
    ]

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.origin_color_map: dict[str, tuple[str, str]] = {"app": ("bright_white", "grey70")}
        self._palette = cycle(self.COLORS)

    def format(self, record):
        msg_body = escape(super().format(record))
        tag = str(getattr(record, "origin", record.module))

        ctag, cbody = self.get_color(tag)
        return f"[bold {ctag}]{tag}[/]: [{cbody}]{msg_body}[/]"

    def get_color(self, origin: str) -> tuple[str, str]:
        if origin not in self.origin_color_map:
            self.origin_color_map[origin] = next(self._palette)
        return self.origin_color_map[origin]


class ConsoleHandler(logging.StreamHandler):

    console: Console = Console(stderr=True)

    def emit(self, record):
        log_message = self.format(record)
        self.console.print(log_message)
