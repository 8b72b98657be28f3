"""
sullivan.log_manager – JSONL run log for the CLI.

Each run appends to ``<LOG_DIR>/run_<YYYYmmdd_HHMMSS>.jsonl``; runs older than
ROTATE_DAYS are moved to ``<LOG_DIR>/archive`` when the next log opens.

    with LogManager() as log:
        with log.step("model build", spec="s2", cap=5) as rec:
            ...
            rec["passed"] = True          # extra fields land in the record
        log.event("group", file="F.grp", rank=0)
"""

from __future__ import annotations
import contextlib, datetime as dt, json, shutil, time
from pathlib import Path
from typing import Iterator

from sullivan.config import LOG_DIR, ROTATE_DAYS

_STAMP = "%Y%m%d_%H%M%S"


class LogManager:
    def __init__(self, base: str | Path = LOG_DIR):
        self.base = Path(base)
        self.archive = self.base / "archive"
        self.archive.mkdir(parents=True, exist_ok=True)
        self.rotated = self._rotate_old()

        self.path = self.base / f"run_{dt.datetime.now().strftime(_STAMP)}.jsonl"
        self._fh = self.path.open("a", encoding="utf-8")

    # -------------------------------------------------- #
    def event(self, kind: str, **fields):
        rec = {"ts": dt.datetime.now().isoformat(timespec="seconds"), "event": kind, **fields}
        json.dump(rec, self._fh, ensure_ascii=False, default=str)
        self._fh.write("\n")
        self._fh.flush()

    @contextlib.contextmanager
    def step(self, kind: str, **fields) -> Iterator[dict]:
        """Time a pipeline step; one record with ``seconds`` and ``outcome`` on exit."""
        rec = dict(fields)
        start = time.perf_counter()
        outcome = "ok"
        try:
            yield rec
        except BaseException as e:
            outcome = type(e).__name__
            raise
        finally:
            self.event(kind, **rec, outcome=outcome, seconds=round(time.perf_counter() - start, 3))

    # -------------------------------------------------- #
    def close(self):
        if not self._fh.closed:
            self._fh.close()

    def __enter__(self) -> "LogManager":
        return self

    def __exit__(self, *exc):
        self.close()

    # -------------------------------------------------- #
    def _rotate_old(self) -> int:
        cutoff = dt.datetime.now() - dt.timedelta(days=ROTATE_DAYS)
        moved = 0
        for f in sorted(self.base.glob("run_*.jsonl")):
            try:
                ts = dt.datetime.strptime(f.stem[len("run_"):], _STAMP)
            except ValueError:
                continue
            if ts < cutoff:
                shutil.move(str(f), self.archive / f.name)
                moved += 1
        return moved
