"""
Prompt text for the three task families
"""

from typing import List, Sequence

from models.clause import AnnotatedClause, Clause
from models.task import EntailmentTask, ReconstructionTask, SelectionTask
from services.formula import render_annotated, render_clause

CALCULUS_DESCRIPTIONS = {
    'superposition': '**Superposition Calculus** (which includes rules like Resolution and Paramodulation)',
    'resolution': '**Resolution Calculus** (which includes rules like Binary Resolution and Factoring)',
}


def _bullets(lines: Sequence[str]) -> List[str]:
    return [f"- {line}" for line in lines]


def _numbered(clauses: Sequence[Clause]) -> List[str]:
    return [f"{index}. {render_clause(clause)}" for index, clause in enumerate(clauses, start=1)]


def _axioms(context: Sequence[AnnotatedClause]) -> List[str]:
    return _bullets([render_annotated(axiom) for axiom in context])


def render_entailment(task: EntailmentTask) -> str:
    lines = [
        "You will be given a logical entailment problem in three parts.",
        "",
        "PART 1: CONTEXT",
        f"The following are general axioms from the domain of **{task.domain_name}**. ",
        "They provide definitions and background theory. ",
        "**Do NOT use them directly in the proof.**",
        "",
        *_axioms(task.context),
        "",
        "",
        "PART 2: THE SPECIFIC PROBLEM",
        "Your task is to evaluate the following specific entailment claim.",
        "",
        "**Premises to use:**",
        *_bullets([render_clause(premise) for premise in task.premises]),
        "",
        "",
        "**Conclusion to prove:**",
        render_clause(task.conjecture),
        "",
        "",
        "PART 3: YOUR TASK",
        "Based **only** on the 'Premises to use', does the 'Conclusion to prove' logically follow?",
        "Answer with a single word: `True` or `False`.",
    ]
    return '\n'.join(lines)


def render_selection(task: SelectionTask) -> str:
    lines = [
        "You are a mathematical logic assistant. ",
        "Your task is to identify a minimal set of premises sufficient for a proof.",
        "",
        "## General Context",
        f"The problem is set in the domain of: **{task.domain_name}**.",
        "The following are the fundamental axioms of this domain. ",
        "They provide general context. **Do not use them in the proof itself.**",
        "Fundamental Axioms:",
        *_axioms(task.context),
        "",
        "## Task",
        "Your goal is to prove the following theorem:",
        "**Theorem:**",
        f"`{render_clause(task.theorem)}`",
        "",
        "Below is a numbered pool of potential premises.",
        "Your task is to identify the **minimal subset** of numbers from this pool ",
        "whose corresponding statements are **sufficient on their own** to prove the theorem.",
        "",
        "**Pool of Premises:**",
        *_numbered(task.pool),
        "",
        "### Question",
        "Which is the smallest set of numbered premises from the pool that is sufficient to prove the theorem,",
        "without using the fundamental axioms from the context?",
        "",
        "### Response Format",
        "Your answer must be **only** a list of numbers, sorted in increasing order. For example: `[2, 5, 8]`.",
    ]
    return '\n'.join(lines)


def render_reconstruction(task: ReconstructionTask) -> str:
    calculus = CALCULUS_DESCRIPTIONS.get(task.calculus, CALCULUS_DESCRIPTIONS['resolution'])
    lines = [
        "Your task is to reconstruct the dependency graph of a mathematical proof from the domain of "
        f"**{task.domain_name}**.",
        "",
        "The proof graph concludes with the theorem: ",
        f"`{render_clause(task.theorem)}`",
        "",
        "## Proof Context & Rules",
        f"This proof was generated by using the {calculus}.",
        "",
        "Therefore, the proof has the following properties:",
        "- **Starting Points:** Some clauses in the list are starting points (axioms) and are not derived "
        "from other clauses.",
        "- **Derived Clauses:** Every other clause is derived from exactly **two** parent clauses from the list.",
        "- **Clause Reuse:** A single clause can be used as a parent in multiple derivation steps.",
        "",
        "## Your Task",
        "Given the rules above, reconstruct the proof from the following shuffled list of clauses.",
        "Identify the derivation for every clause that is not a starting point.",
        "",
        "**Shuffled Clauses:**",
        *_numbered(task.clauses),
        "",
        "## Required Output Format",
        "- List **only** the derivation steps.",
        "- Each step must be on a new line.",
        "- Use the exact format `CHILD <- PARENT_1, PARENT_2`. Example: `5 <- 2, 4`.",
        "- All clauses from the list must be used in the final structure.",
        "- No explanations, comments, or extra text.",
    ]
    return '\n'.join(lines)


_RENDERERS = {
    EntailmentTask: render_entailment,
    SelectionTask: render_selection,
    ReconstructionTask: render_reconstruction,
}


def render_prompt(task) -> str:
    """Render the prompt shown to a model for any task"""
    try:
        renderer = _RENDERERS[type(task)]
    except KeyError:
        raise TypeError(f"no prompt template for {type(task).__name__}") from None
    return renderer(task)
