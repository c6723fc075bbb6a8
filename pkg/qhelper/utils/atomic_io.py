"""
Atomic file writing for report, CSV and plot-data outputs.

Every write goes to a temporary file in the target directory and is moved into
place under an exclusive portalocker lock, so readers never see a partial file.
"""
import os
import shutil
import tempfile
from typing import Callable

import pandas as pd
import portalocker

from qhelper.core.errors import OutputLockError
from qhelper.utils.centralized_logging import get_logger

logger = get_logger(__name__)


class AtomicWriter:
    """Temp file + rename writes, serialized by a sidecar lock file."""

    @staticmethod
    def _write_atomic(target_path: str, write: Callable[[str], None]) -> None:
        directory = os.path.dirname(os.path.abspath(target_path))
        os.makedirs(directory, exist_ok=True)
        temp_path = None
        try:
            with tempfile.NamedTemporaryFile(mode="w", suffix=".tmp", dir=directory,
                                             delete=False, encoding="utf-8") as temp_file:
                temp_path = temp_file.name
            write(temp_path)
            logger.debug(f"Wrote data to temporary file: {temp_path}")
            shutil.move(temp_path, target_path)
            logger.info(f"Atomically wrote: {target_path}")
        except Exception:
            if temp_path and os.path.exists(temp_path):
                os.unlink(temp_path)
            raise

    @staticmethod
    def _locked(target_path: str, write: Callable[[str], None], timeout: float) -> None:
        lock_path = os.path.abspath(target_path) + ".lock"
        os.makedirs(os.path.dirname(lock_path), exist_ok=True)
        try:
            lock = portalocker.Lock(lock_path, mode="w", timeout=timeout)
            lock.acquire()
        except portalocker.exceptions.LockException as e:
            raise OutputLockError(f"{target_path} is locked by another writer: {e}")
        try:
            with lock:
                AtomicWriter._write_atomic(target_path, write)
        finally:
            if os.path.exists(lock_path):
                try:
                    os.unlink(lock_path)
                except OSError:
                    pass

    @staticmethod
    def write_csv(df: pd.DataFrame, target_path: str, timeout: float = 10.0, **csv_kwargs) -> None:
        """
        Write a DataFrame as CSV atomically.

        Args:
            df: DataFrame to write
            target_path: Final path for the CSV file
            timeout: Lock timeout in seconds
            **csv_kwargs: Extra arguments for DataFrame.to_csv (index=False by default)
        """
        csv_kwargs.setdefault("index", False)
        csv_kwargs.setdefault("lineterminator", "\n")
        AtomicWriter._locked(target_path, lambda path: df.to_csv(path, **csv_kwargs), timeout)

    @staticmethod
    def write_text(text: str, target_path: str, timeout: float = 10.0) -> None:
        def write(path: str) -> None:
            with open(path, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(text)

        AtomicWriter._locked(target_path, write, timeout)


def write_csv_atomic(df: pd.DataFrame, target_path: str, **csv_kwargs) -> None:
    AtomicWriter.write_csv(df, target_path, **csv_kwargs)


def write_text_atomic(text: str, target_path: str) -> None:
    AtomicWriter.write_text(text, target_path)
