"""
JSONL dataset and manifest output, plus readers for tasks and answers
"""

import os
import platform
from collections import Counter
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

import networkx as nx
import orjson
import structlog

from config.settings import Config
from models.grading import DatasetManifest, GradeReport
from models.task import task_from_record
from services.prompt_renderer import render_prompt
from utils.errors import DatasetIOError
from utils.seeding import SeedGenerator

logger = structlog.get_logger(__name__)


def configuration_key(domain: str, task_type: str, level: int) -> str:
    return f"{domain}/{task_type}/L{level}"


def manifest_path(path: Path) -> Path:
    return path.with_suffix('.manifest.json')


def tool_versions() -> Dict[str, str]:
    return {
        Config.SERVICE_NAME: Config.VERSION,
        'python': platform.python_version(),
        'networkx': nx.__version__,
    }


def _timestamp() -> str:
    epoch = os.getenv('SOURCE_DATE_EPOCH')
    moment = datetime.fromtimestamp(int(epoch), tz=timezone.utc) if epoch else datetime.now(timezone.utc)
    return moment.isoformat()


def emit_jsonl(tasks: Sequence, path, *, seed: int = 0, domains: Optional[List[str]] = None,
               shortfall: Optional[Dict[str, int]] = None,
               extra_versions: Optional[Dict[str, str]] = None) -> DatasetManifest:
    """
    Write one JSON object per task and a manifest next to the file

    Args:
        tasks: Generated tasks, written in the given order
        path: Output JSONL path
        seed: Global seed of the run
        domains: Domain codes of the run
        shortfall: Missing instance counts per configuration

    Returns:
        The manifest; its content hash covers the dataset bytes and counts
        but not the timestamp or tool versions
    """
    path = Path(path)
    records = [task.to_record(render_prompt(task)) for task in tasks]
    data = b''.join(orjson.dumps(record, option=orjson.OPT_SORT_KEYS) + b'\n' for record in records)
    counts = Counter(configuration_key(record['domain'], record['task_type'], record['level']) for record in records)

    manifest = DatasetManifest(
        seed=seed,
        domains=list(domains) if domains is not None else list(dict.fromkeys(record['domain'] for record in records)),
        counts=dict(sorted(counts.items())),
        shortfall=dict(sorted((shortfall or {}).items())),
        tool_versions={**tool_versions(), **(extra_versions or {})},
        timestamp=_timestamp(),
        total=len(records),
        path=str(path),
    )
    hashed = {'counts': manifest.counts, 'shortfall': manifest.shortfall, 'seed': seed, 'domains': manifest.domains}
    manifest.content_hash = SeedGenerator.generate_hash(data + orjson.dumps(hashed, option=orjson.OPT_SORT_KEYS))

    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)
        manifest_path(path).write_bytes(
            orjson.dumps(manifest.to_dict(), option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2) + b'\n')
    except OSError as exc:
        raise DatasetIOError(f"cannot write dataset: {exc}", path=str(path)) from exc

    logger.info("dataset written", path=str(path), records=len(records), content_hash=manifest.content_hash)
    return manifest


def read_jsonl(path) -> List[Dict[str, Any]]:
    path = Path(path)
    records = []
    try:
        with path.open('rb') as handle:
            for number, line in enumerate(handle, start=1):
                if not line.strip():
                    continue
                try:
                    records.append(orjson.loads(line))
                except orjson.JSONDecodeError as exc:
                    raise DatasetIOError(f"line {number} is not valid JSON: {exc}", path=str(path),
                                         line=number) from exc
    except OSError as exc:
        raise DatasetIOError(f"cannot read {path}: {exc}", path=str(path)) from exc
    return records


def read_tasks(path) -> List:
    return [task_from_record(record) for record in read_jsonl(path)]


def read_answers(path) -> Dict[str, Any]:
    """Answers file: one {id, answer} object per line"""
    answers = {}
    for record in read_jsonl(path):
        if 'id' not in record or 'answer' not in record:
            raise DatasetIOError("answer records need 'id' and 'answer'", path=str(path))
        answers[record['id']] = record['answer']
    return answers


def write_reports(reports: Iterable[GradeReport], path) -> int:
    path = Path(path)
    lines = [orjson.dumps(report.to_dict(), option=orjson.OPT_SORT_KEYS) + b'\n' for report in reports]
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(b''.join(lines))
    except OSError as exc:
        raise DatasetIOError(f"cannot write grade reports: {exc}", path=str(path)) from exc
    return len(lines)
