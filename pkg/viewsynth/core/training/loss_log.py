import csv
from pathlib import Path


class LossLog:
    """One CSV row per training step; appends when resuming into an existing log."""

    def __init__(self, path: Path, columns: list[str], append: bool = False):
        self.path = Path(path)
        self.columns = columns
        fresh = not (append and self.path.exists())
        self.handle = open(self.path, "w" if fresh else "a", newline="")
        self.writer = csv.writer(self.handle, lineterminator="\n")
        if fresh:
            self.writer.writerow(columns)

    def write(self, **values) -> None:
        self.writer.writerow([_fmt(values[c]) for c in self.columns])
        self.handle.flush()

    def close(self) -> None:
        self.handle.close()

    def __enter__(self) -> "LossLog":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.8g}"
    return str(value)
