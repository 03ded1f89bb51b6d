"""
Parallel scenario runner for `shaketab batch`.

Each scenario runs in a worker thread; a capacity limiter bounds how many run
at once. A failing scenario is logged and reported, never fatal to the batch.
"""

import logging
import threading
from functools import partial
from pathlib import Path
from typing import List, Union

import anyio

from config.settings import settings
from core.errors import IoFailure, ShakeTabError, exit_code_for, safe_execute
from core.logger import ROOT_LOGGER, add_file_handler, get_logger
from core.pipeline.simulation import run_simulate
from core.schemas import BatchResult, load_config

logger = get_logger(__name__)

CONFIG_SUFFIXES = (".cfg", ".conf", ".ini", ".txt")


class _ThreadFilter(logging.Filter):
    """Pass only records emitted by one thread."""

    def __init__(self, thread_id: int):
        super().__init__()
        self.thread_id = thread_id

    def filter(self, record: logging.LogRecord) -> bool:
        return record.thread == self.thread_id


def discover_configs(config_dir: Union[str, Path]) -> List[Path]:
    config_dir = Path(config_dir)
    if not config_dir.is_dir():
        raise IoFailure(f"config directory not found: {config_dir}")
    return sorted(p for p in config_dir.iterdir() if p.is_file() and p.suffix in CONFIG_SUFFIXES)


def run_scenario_file(path: Path) -> BatchResult:
    """Load and run one scenario, logging to `<output>.log` next to its CSV."""
    try:
        config = load_config(path)
    except ShakeTabError as e:
        logger.error(f"[BATCH] {path.name}: {type(e).__name__}: {e}")
        return BatchResult(config_path=path, ok=False, exit_code=exit_code_for(e), error=str(e))

    root = logging.getLogger(ROOT_LOGGER)
    handler = add_file_handler(
        root, Path(config.output_path).with_suffix(".log"), use_json=settings.LOG_JSON
    )
    handler.addFilter(_ThreadFilter(threading.get_ident()))
    try:
        logger.info(f"[BATCH] Running {path.name}")
        record = run_simulate(config)
        return BatchResult(
            config_path=path,
            ok=True,
            output_path=config.output_path,
            summary=record.summary,
        )
    except ShakeTabError as e:
        logger.error(f"[BATCH] {path.name} failed: {type(e).__name__}: {e}")
        return BatchResult(
            config_path=path,
            ok=False,
            exit_code=exit_code_for(e),
            error=f"{type(e).__name__}: {e}",
            output_path=config.output_path,
        )
    finally:
        root.removeHandler(handler)
        handler.close()


async def _run_all(paths: List[Path], jobs: int) -> List[BatchResult]:
    limiter = anyio.CapacityLimiter(jobs)
    results: List[BatchResult] = [None] * len(paths)

    async def worker(index: int, path: Path) -> None:
        fallback = BatchResult(config_path=path, ok=False, exit_code=1, error="unexpected failure")
        results[index] = await anyio.to_thread.run_sync(
            partial(
                safe_execute,
                run_scenario_file,
                path,
                default_return=fallback,
                error_message=f"[BATCH] {path.name}",
            ),
            limiter=limiter,
        )

    async with anyio.create_task_group() as tg:
        for index, path in enumerate(paths):
            tg.start_soon(worker, index, path)
    return results


def run_batch(config_dir: Union[str, Path], jobs: int = 1) -> List[BatchResult]:
    """Run every scenario file in a directory with at most `jobs` in flight."""
    paths = discover_configs(config_dir)
    if not paths:
        logger.warning(f"[BATCH] no scenario files in {config_dir}")
        return []
    logger.info(f"[BATCH] {len(paths)} scenarios, {jobs} parallel")
    results = anyio.run(_run_all, paths, max(1, int(jobs)))
    failed = [r for r in results if not r.ok]
    logger.info(f"[BATCH] finished: {len(results) - len(failed)} ok, {len(failed)} failed")
    return results
