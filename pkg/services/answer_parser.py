"""
Lenient extraction of model answers
"""

import re
from typing import Any, List, Tuple

from models.grading import ParsedAnswer
from models.task import TaskKind
from utils.errors import AnswerFormatError

_BOOLEAN = re.compile(r'\b(true|false)\b', re.IGNORECASE)
_BRACKETED = re.compile(r'\[([^\[\]]*)\]')
_BARE_LIST = re.compile(r'^[\d\s,]+$')
_STEP = re.compile(r'^(\d+)\s*<-\s*(\d+)\s*,\s*(\d+)$')


def _integers(text: str) -> List[int]:
    parts = [part for part in re.split(r'[\s,]+', text.strip()) if part]
    if not all(part.isdigit() for part in parts):
        raise AnswerFormatError(f"not an integer list: {text!r}")
    return [int(part) for part in parts]


def parse_entailment(text: str) -> bool:
    words = {match.lower() for match in _BOOLEAN.findall(text)}
    if len(words) != 1:
        raise AnswerFormatError("expected exactly one of True or False")
    return words.pop() == 'true'


def parse_selection(text: str) -> Tuple[int, ...]:
    """Last bracketed list in the text, or the whole text when it is a bare list"""
    groups = _BRACKETED.findall(text)
    if groups:
        numbers = _integers(groups[-1])
    elif _BARE_LIST.match(text.strip()):
        numbers = _integers(text)
    else:
        raise AnswerFormatError("no list of numbers found")
    if any(number < 1 for number in numbers):
        raise AnswerFormatError("premise numbers start at 1")
    return tuple(sorted(set(numbers)))


def parse_reconstruction(text: str) -> Tuple[Tuple[int, int, int], ...]:
    """One `CHILD <- PARENT_1, PARENT_2` step per line; lines without an arrow are ignored"""
    steps = []
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip().lstrip('-*').strip().strip('`').strip()
        if '<-' not in line:
            continue
        match = _STEP.match(line)
        if match is None:
            raise AnswerFormatError(f"line {number}: malformed step {line!r}", line=number)
        child, first, second = (int(group) for group in match.groups())
        if min(child, first, second) < 1:
            raise AnswerFormatError(f"line {number}: clause numbers start at 1", line=number)
        if first == second:
            raise AnswerFormatError(f"line {number}: parents must differ", line=number)
        steps.append((child, first, second))
    if not steps:
        raise AnswerFormatError("no derivation steps found")
    return tuple(steps)


_PARSERS = {
    TaskKind.ENTAILMENT: parse_entailment,
    TaskKind.SELECTION: parse_selection,
    TaskKind.RECONSTRUCTION: parse_reconstruction,
}


def parse_answer(task_kind: TaskKind, text: str) -> ParsedAnswer:
    """
    Parse a free-form answer for a task kind

    Raises:
        AnswerFormatError: nothing of the expected shape was found
    """
    return ParsedAnswer(TaskKind(task_kind), _PARSERS[TaskKind(task_kind)](text))


def answer_text(value: Any) -> str:
    """Turn a structured answer from an answers file back into answer text"""
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, (list, tuple)):
        if value and all(isinstance(item, (list, tuple)) for item in value):
            return '\n'.join(f"{item[0]} <- {item[1]}, {item[2]}" for item in value if len(item) == 3)
        return f"[{', '.join(str(item) for item in value)}]"
    return '' if value is None else str(value)
