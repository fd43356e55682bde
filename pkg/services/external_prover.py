"""
ExternalProver - Subprocess adapter for E-style saturation and Vampire-style refutation
"""

import math
import os
import shlex
import shutil
import subprocess
import tempfile
import threading
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import structlog

from models.clause import Clause
from models.prover import ExternalProverConfig, SaturationOutput, Verdict, VerdictStatus
from services.formula import clause_variables, render_clause
from services.tstp_parser import parse_tstp_derivation
from utils.errors import ExternalProverError, TstpParseError
from utils.szs_status import SzsStatus

logger = structlog.get_logger(__name__)

DEFAULT_ARGUMENTS = {
    'eprover': '--tstp-format --output-level=4 --print-saturated --soft-cpu-limit={timeout} {problem}',
    'vampire': '--mode casc --proof off -t {timeout} {problem}',
}


class ExternalProver:
    """Runs one prover binary; concurrent invocations share a bounded number of process slots"""

    GRACE_SECONDS = 2.0

    def __init__(self, config: ExternalProverConfig, max_concurrent: int = 1, tptp_root: Optional[str] = None):
        self.config = config
        self.tptp_root = tptp_root
        self._slots = threading.BoundedSemaphore(max(1, max_concurrent))

    def resolve_executable(self) -> Optional[str]:
        executable = self.config.executable
        found = shutil.which(executable)
        if found:
            return found
        if os.path.isfile(executable) and os.access(executable, os.X_OK):
            return executable
        return None

    def is_available(self) -> bool:
        return self.resolve_executable() is not None

    def ensure_available(self) -> str:
        executable = self.resolve_executable()
        if executable is None:
            raise ExternalProverError(f"{self.config.name} executable not found: {self.config.executable}",
                                      prover=self.config.name)
        return executable

    def build_command(self, problem: Path) -> List[str]:
        timeout = max(1, math.ceil(self.config.limits.timeout))
        arguments = [part.format(problem=str(problem), timeout=timeout) for part in shlex.split(self.config.arguments)]
        return [self.ensure_available()] + arguments

    def invoke(self, problem: Path) -> Tuple[str, bool]:
        """
        Run the prover on a problem file

        Args:
            problem: Path of a TPTP problem file

        Returns:
            Tuple of (stdout, timed_out); stdout holds whatever was flushed before a kill
        """
        command = self.build_command(problem)
        environment = dict(os.environ)
        if self.tptp_root:
            environment['TPTP'] = self.tptp_root
        with self._slots:
            logger.debug("launching external prover", prover=self.config.name, command=command)
            try:
                completed = subprocess.run(
                    command,
                    capture_output=True,
                    text=True,
                    timeout=self.config.limits.timeout + self.GRACE_SECONDS,
                    env=environment,
                )
            except subprocess.TimeoutExpired as exc:
                logger.warning("external prover timed out", prover=self.config.name, problem=str(problem))
                return _decode(exc.stdout), True
            except OSError as exc:
                raise ExternalProverError(f"failed to start {self.config.name}: {exc}",
                                          error_code='PROVER_SPAWN_FAILED', prover=self.config.name) from exc
        if completed.returncode not in (0, 1) and not completed.stdout:
            logger.warning("external prover exited abnormally", prover=self.config.name,
                           returncode=completed.returncode, stderr=completed.stderr[-500:])
        return completed.stdout, False

    def run_saturation(self, axiom_file) -> SaturationOutput:
        """
        Saturate an axiom file with no conjecture and parse the printed derivation

        A timeout is not an error: the records flushed before the kill are returned.
        """
        axiom_file = Path(axiom_file)
        if not axiom_file.is_file():
            raise ExternalProverError(f"axiom file not found: {axiom_file}", error_code='AXIOM_FILE_NOT_FOUND',
                                      path=str(axiom_file))
        stdout, timed_out = self.invoke(axiom_file)
        output = parse_tstp_derivation(stdout, prover=self.config.name)
        if timed_out:
            output.complete = False
            output.szs_status = output.szs_status or 'Timeout'
        logger.info("external saturation finished", prover=self.config.name, records=len(output.records),
                    status=output.szs_status, timed_out=timed_out)
        return output

    def check_entailment(self, premises: Sequence[Clause], conjecture: Clause) -> Verdict:
        """Decide premises ⊨ conjecture from the prover's SZS status"""
        with tempfile.TemporaryDirectory(prefix='satforge-') as workdir:
            problem = Path(workdir) / 'problem.p'
            problem.write_text(render_problem(premises, conjecture), encoding='utf-8')
            stdout, timed_out = self.invoke(problem)

        status = SzsStatus.parse_status(stdout)
        verdict_status = SzsStatus.to_verdict_status(status)
        if timed_out and status is None:
            return Verdict(VerdictStatus.RESOURCE_OUT, reason='timeout')
        evidence = ()
        if verdict_status == VerdictStatus.ENTAILED:
            try:
                evidence = tuple(parse_tstp_derivation(stdout, prover=self.config.name).records)
            except TstpParseError:
                logger.debug("proof output not parseable, keeping status only", prover=self.config.name)
        return Verdict(verdict_status, evidence, reason=status or 'no status')


def render_problem(premises: Sequence[Clause], conjecture: Clause) -> str:
    """TPTP problem text: premises as cnf axioms and the universally closed conjecture"""
    lines = [f"cnf(premise_{index},axiom,{render_clause(clause)})." for index, clause in enumerate(premises, start=1)]
    variables = clause_variables(conjecture)
    body = '$false' if conjecture.is_empty else render_clause(conjecture)
    if variables:
        body = f"![{','.join(variable.name for variable in variables)}]:{body}"
    lines.append(f"fof(goal,conjecture,{body}).")
    return '\n'.join(lines) + '\n'


def _decode(output) -> str:
    if output is None:
        return ''
    if isinstance(output, bytes):
        return output.decode('utf-8', errors='replace')
    return output


def run_external_saturation(axiom_file, config: ExternalProverConfig,
                            tptp_root: Optional[str] = None) -> SaturationOutput:
    return ExternalProver(config, tptp_root=tptp_root).run_saturation(axiom_file)


def check_entailment_external(premises: Sequence[Clause], conjecture: Clause,
                              config: ExternalProverConfig) -> Verdict:
    return ExternalProver(config).check_entailment(premises, conjecture)
