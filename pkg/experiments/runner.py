"""
Fan independent flows out to worker processes
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

from solver.scheme import run
from utils.config import load_settings


def _run_task(task):
    return run(**task)


def run_flows(tasks, jobs=None):
    """
    Run solver.run for each task (a dict of its keyword arguments)

    Args:
        tasks (list): Keyword-argument dicts for solver.run
        jobs (int): Worker processes; 1 runs serially (default from settings)

    Returns:
        list: FlowTrace per task, in task order
    """
    tasks = list(tasks)
    jobs = int(load_settings()["experiments"]["jobs"] if jobs is None else jobs)
    if jobs <= 1 or len(tasks) <= 1:
        return [_run_task(task) for task in tasks]
    workers = min(jobs, len(tasks))
    print(f"[RUN] {len(tasks)} flows on {workers} worker processes")
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_task, tasks))
