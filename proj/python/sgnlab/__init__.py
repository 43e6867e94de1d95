from pathlib import Path

from ._sgnlab import *  # noqa: F401,F403
from ._sgnlab import __version__, run as _run


def run_file(path, overrides=()):
    """Run the scenario in an INI file and return its summary dict."""
    return _run(Path(path).read_text(), list(overrides))
