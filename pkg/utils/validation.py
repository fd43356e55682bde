"""
ConfigValidator - Validation of pipeline configuration data
"""

from typing import Any, Dict, List


class ConfigValidator:
    """Utility class for validating raw pipeline configuration mappings"""

    PROVER_MODES = ('internal', 'external', 'auto')
    TASK_KINDS = ('entailment', 'selection', 'reconstruction')
    LEVEL_COUNT = 4

    # Benchmark defaults; any positive values are accepted
    DEFAULT_ENTAILMENT_K = (2, 3, 4, 6)
    DEFAULT_SELECTION_K = (2, 4, 6, 8)
    DEFAULT_DEPTHS = (1, 2, 3, 4)

    @staticmethod
    def _is_int(value: Any) -> bool:
        return isinstance(value, int) and not isinstance(value, bool)

    @staticmethod
    def _is_number(value: Any) -> bool:
        return isinstance(value, (int, float)) and not isinstance(value, bool)

    @staticmethod
    def validate_pipeline_config(data: Dict) -> Dict:
        """
        Validate a pipeline configuration mapping

        Args:
            data: Configuration with defaults already merged in

        Returns:
            Dict with validation results
        """
        if not isinstance(data, dict):
            return {'valid': False, 'errors': ['Configuration must be a mapping']}

        errors: List[str] = []
        if not ConfigValidator._is_int(data.get('seed')):
            errors.append("Field 'seed' must be an integer")

        errors.extend(ConfigValidator.validate_domains(data.get('domains'))['errors'])
        errors.extend(ConfigValidator.validate_prover(data.get('prover') or {})['errors'])
        errors.extend(ConfigValidator.validate_rater(data.get('rater') or {})['errors'])
        errors.extend(ConfigValidator.validate_levels(data.get('levels') or {})['errors'])
        errors.extend(ConfigValidator.validate_counts(data.get('counts') or {})['errors'])

        generation = data.get('generation') or {}
        if not ConfigValidator._is_int(generation.get('retry_budget')) or generation['retry_budget'] < 1:
            errors.append("Field 'generation.retry_budget' must be a positive integer")
        if not ConfigValidator._is_int(generation.get('workers')) or generation['workers'] < 1:
            errors.append("Field 'generation.workers' must be a positive integer")

        return {
            'valid': len(errors) == 0,
            'errors': errors
        }

    @staticmethod
    def validate_domains(domains: Any) -> Dict:
        errors = []
        if not isinstance(domains, list) or not domains:
            return {'valid': False, 'errors': ["Field 'domains' must be a non-empty list"]}
        codes = set()
        for position, domain in enumerate(domains, start=1):
            if not isinstance(domain, dict):
                errors.append(f"Domain {position} must be a mapping")
                continue
            code = domain.get('code')
            if not isinstance(code, str) or not code.strip():
                errors.append(f"Domain {position} needs a 'code'")
            elif code in codes:
                errors.append(f"Domain code '{code}' is duplicated")
            else:
                codes.add(code)
            if not isinstance(domain.get('axiom_file'), str) or not domain['axiom_file'].strip():
                errors.append(f"Domain {position} needs an 'axiom_file'")
        return {'valid': len(errors) == 0, 'errors': errors}

    @staticmethod
    def validate_prover(prover: Dict) -> Dict:
        errors = []
        if prover.get('mode') not in ConfigValidator.PROVER_MODES:
            errors.append(f"Field 'prover.mode' must be one of {', '.join(ConfigValidator.PROVER_MODES)}")
        for section in ('oracle', 'saturation'):
            limits = prover.get(section) or {}
            for key in ('timeout', 'max_clauses', 'max_weight'):
                value = limits.get(key)
                if not ConfigValidator._is_number(value) or value <= 0:
                    errors.append(f"Field 'prover.{section}.{key}' must be positive")
        for name in ('eprover', 'vampire'):
            external = prover.get(name) or {}
            if not isinstance(external.get('executable'), str) or not external['executable']:
                errors.append(f"Field 'prover.{name}.executable' is required")
            if '{problem}' not in str(external.get('arguments', '')):
                errors.append(f"Field 'prover.{name}.arguments' must contain '{{problem}}'")
        return {'valid': len(errors) == 0, 'errors': errors}

    @staticmethod
    def validate_rater(rater: Dict) -> Dict:
        errors = []
        weight_cap = rater.get('weight_cap')
        if not ConfigValidator._is_number(weight_cap) or weight_cap <= 0:
            errors.append("Field 'rater.weight_cap' must be positive")
        threshold = rater.get('interest_threshold')
        if not ConfigValidator._is_number(threshold) or not 0 <= threshold <= 1:
            errors.append("Field 'rater.interest_threshold' must lie in [0, 1]")
        weights = rater.get('weights') or {}
        values = [weights.get(key) for key in ('complexity', 'surprisingness', 'usefulness')]
        if not all(ConfigValidator._is_number(value) and value >= 0 for value in values):
            errors.append("Field 'rater.weights' needs non-negative complexity, surprisingness and usefulness")
        elif abs(sum(values) - 1.0) > 1e-6:
            errors.append("Field 'rater.weights' must sum to 1")
        if not ConfigValidator._is_int(rater.get('top_n')) or rater['top_n'] < 1:
            errors.append("Field 'rater.top_n' must be a positive integer")
        return {'valid': len(errors) == 0, 'errors': errors}

    @staticmethod
    def validate_levels(levels: Dict) -> Dict:
        errors = []
        for key in ('entailment_k', 'selection_k', 'reconstruction_depths'):
            values = levels.get(key)
            if not isinstance(values, list) or len(values) != ConfigValidator.LEVEL_COUNT:
                errors.append(f"Field 'levels.{key}' must list {ConfigValidator.LEVEL_COUNT} values")
                continue
            if not all(ConfigValidator._is_int(value) and value >= 1 for value in values):
                errors.append(f"Field 'levels.{key}' must hold positive integers")
        matrix = levels.get('matrix') or {}
        if not isinstance(matrix, dict):
            errors.append("Field 'levels.matrix' must be a mapping")
            matrix = {}
        for kind, cells in matrix.items():
            if kind not in ConfigValidator.TASK_KINDS:
                errors.append(f"Unknown task kind '{kind}' in levels.matrix")
                continue
            for level, cell in (cells or {}).items():
                if not ConfigValidator._is_int(level) or not 1 <= level <= ConfigValidator.LEVEL_COUNT:
                    errors.append(f"levels.matrix.{kind}: unknown level {level}")
                elif not isinstance(cell, dict) or not set(cell) <= {'d', 'k'}:
                    errors.append(f"levels.matrix.{kind}.{level} may only set 'd' and 'k'")
                elif not all(ConfigValidator._is_int(value) and value >= 0 for value in cell.values()) \
                        or cell.get('d', 1) < 1:
                    errors.append(f"levels.matrix.{kind}.{level} needs d >= 1 and k >= 0")
                elif kind == 'reconstruction' and cell.get('k', 0) != 0:
                    errors.append(f"levels.matrix.reconstruction.{level} cannot set k")
        return {'valid': len(errors) == 0, 'errors': errors}

    @staticmethod
    def validate_counts(counts: Dict) -> Dict:
        errors = []
        per_configuration = counts.get('per_configuration')
        if not ConfigValidator._is_int(per_configuration) or per_configuration < 0:
            errors.append("Field 'counts.per_configuration' must be a non-negative integer")
        kinds = counts.get('task_kinds')
        if not isinstance(kinds, list) or not set(kinds) <= set(ConfigValidator.TASK_KINDS):
            errors.append(f"Field 'counts.task_kinds' must be a subset of {', '.join(ConfigValidator.TASK_KINDS)}")
        levels = counts.get('levels')
        if not isinstance(levels, list) or not all(
                ConfigValidator._is_int(level) and 1 <= level <= ConfigValidator.LEVEL_COUNT for level in levels):
            errors.append(f"Field 'counts.levels' must list levels between 1 and {ConfigValidator.LEVEL_COUNT}")
        return {'valid': len(errors) == 0, 'errors': errors}
