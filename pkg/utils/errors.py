"""
Exception hierarchy shared by every satforge module
"""

from typing import Any, Dict, Optional


class ForgeError(Exception):
    """Base error carrying a machine-readable error code"""

    error_code = 'FORGE_ERROR'

    def __init__(self, message: str, error_code: Optional[str] = None, **details: Any):
        super().__init__(message)
        self.message = message
        if error_code:
            self.error_code = error_code
        self.details = details

    def to_dict(self) -> Dict[str, Any]:
        """
        Convert the error into the response shape used by the CLI

        Returns:
            Dict with success flag, message, code and any extra details
        """
        payload = {
            'success': False,
            'error': self.message,
            'error_code': self.error_code,
        }
        payload.update(self.details)
        return payload


class TptpSyntaxError(ForgeError):
    """Malformed TPTP text, located by line and column"""

    error_code = 'TPTP_SYNTAX'

    def __init__(self, message: str, line: int, column: int, **details: Any):
        super().__init__(f"line {line}, column {column}: {message}", line=line, column=column, **details)
        self.reason = message
        self.line = line
        self.column = column


class UnsupportedRoleError(ForgeError):
    error_code = 'UNSUPPORTED_ROLE'


class TstpParseError(ForgeError):
    """Prover output that could not be read as a TSTP derivation"""

    error_code = 'TSTP_PARSE'

    def __init__(self, message: str, line: int, **details: Any):
        super().__init__(f"line {line}: {message}", line=line, **details)
        self.line = line


class ExternalProverError(ForgeError):
    error_code = 'PROVER_UNAVAILABLE'


class DerivationGraphError(ForgeError):
    error_code = 'INVALID_GRAPH'


class TaskGenerationError(ForgeError):
    error_code = 'GENERATION_FAILED'


class OracleResourceOut(ForgeError):
    """An oracle query ended without a definite verdict"""

    error_code = 'ORACLE_RESOURCE_OUT'


class ConfigurationError(ForgeError):
    error_code = 'CONFIG_INVALID'


class AnswerFormatError(ForgeError):
    error_code = 'ANSWER_FORMAT'


class GradingError(ForgeError):
    error_code = 'GRADING_FAILED'


class DatasetIOError(ForgeError):
    error_code = 'DATASET_IO'
