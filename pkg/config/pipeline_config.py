"""
Pipeline configuration file loading
"""

import copy
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import structlog
import yaml

from config.settings import get_config
from models.prover import ExternalProverConfig, ProverLimits
from models.rating import RaterConfig
from models.task import DifficultySpec, TaskKind
from services.external_prover import DEFAULT_ARGUMENTS
from utils.errors import ConfigurationError
from utils.validation import ConfigValidator

logger = structlog.get_logger(__name__)

DOMAIN_NAMES = {
    'ALG': 'Algebra',
    'FLD': 'Fields',
    'GEO': 'Geometry',
    'SET': 'Set Theory',
    'TOP': 'Topology',
}


def _defaults() -> Dict[str, Any]:
    settings = get_config()
    return {
        'seed': 0,
        'domains': [],
        'axiom_root': None,
        'prover': {
            'mode': 'internal',
            'oracle': {
                'timeout': settings.PROVER_TIMEOUT,
                'max_clauses': settings.PROVER_MAX_CLAUSES,
                'max_weight': settings.PROVER_MAX_WEIGHT,
            },
            # Saturation should stop on max_clauses, not on the clock, to stay reproducible
            'saturation': {'timeout': 600, 'max_clauses': 1500, 'max_weight': 30},
            'eprover': {'executable': settings.EPROVER_PATH, 'arguments': DEFAULT_ARGUMENTS['eprover']},
            'vampire': {'executable': settings.VAMPIRE_PATH, 'arguments': DEFAULT_ARGUMENTS['vampire']},
        },
        'rater': {
            'weight_cap': 60,
            'interest_threshold': 0.5,
            'weights': {'complexity': 1 / 3, 'surprisingness': 1 / 3, 'usefulness': 1 / 3},
            'top_n': 50,
        },
        'levels': {
            'entailment_k': list(ConfigValidator.DEFAULT_ENTAILMENT_K),
            'selection_k': list(ConfigValidator.DEFAULT_SELECTION_K),
            'reconstruction_depths': list(ConfigValidator.DEFAULT_DEPTHS),
            'matrix': {},
        },
        'counts': {
            'per_configuration': 50,
            'task_kinds': list(ConfigValidator.TASK_KINDS),
            'levels': [1, 2, 3, 4],
        },
        'generation': {
            'retry_budget': 20,
            'balance_labels': True,
            'strict_distractor_check': False,
            'workers': settings.WORKER_COUNT,
        },
        'grading': {'strict': True},
    }


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


@dataclass(frozen=True)
class DomainConfig:
    code: str
    name: str
    axiom_file: Path


@dataclass(frozen=True)
class ProverSettings:
    mode: str
    oracle: ProverLimits
    saturation: ProverLimits
    eprover: ExternalProverConfig
    vampire: ExternalProverConfig
    tptp_root: Optional[str] = None


@dataclass(frozen=True)
class LevelSettings:
    entailment_k: Tuple[int, ...]
    selection_k: Tuple[int, ...]
    reconstruction_depths: Tuple[int, ...]
    matrix: Dict[str, Dict[int, Dict[str, int]]] = field(default_factory=dict)


@dataclass(frozen=True)
class CountSettings:
    per_configuration: int
    task_kinds: Tuple[TaskKind, ...]
    levels: Tuple[int, ...]


@dataclass(frozen=True)
class GenerationSettings:
    retry_budget: int = 20
    balance_labels: bool = True
    strict_distractor_check: bool = False
    workers: int = 1


@dataclass(frozen=True)
class GradingSettings:
    strict: bool = True


@dataclass(frozen=True)
class PipelineConfig:
    seed: int
    domains: Tuple[DomainConfig, ...]
    prover: ProverSettings
    rater: RaterConfig
    levels: LevelSettings
    counts: CountSettings
    generation: GenerationSettings
    grading: GradingSettings
    source: Optional[Path] = None

    def domain(self, code: str) -> DomainConfig:
        for domain in self.domains:
            if domain.code == code:
                return domain
        raise ConfigurationError(f"unknown domain: {code}", error_code='UNKNOWN_DOMAIN', domain=code)

    @property
    def expected_total(self) -> int:
        return len(self.domains) * len(self.counts.task_kinds) * len(self.counts.levels) * \
            self.counts.per_configuration


def _limits(data: Dict[str, Any]) -> ProverLimits:
    return ProverLimits(timeout=float(data['timeout']), max_clauses=int(data['max_clauses']),
                        max_weight=int(data['max_weight']))


def _resolve_axiom_file(axiom_file: str, axiom_root: Optional[str], base_dir: Optional[Path]) -> Path:
    path = Path(axiom_file)
    if path.is_absolute():
        return path
    if axiom_root:
        return Path(axiom_root) / path
    return (base_dir / path) if base_dir is not None else path


def build_pipeline_config(data: Dict[str, Any], source: Optional[Path] = None) -> PipelineConfig:
    """
    Validate a raw mapping (defaults merged in) and build the typed config

    Raises:
        ConfigurationError: with every validation error listed
    """
    validation = ConfigValidator.validate_pipeline_config(data)
    if not validation['valid']:
        raise ConfigurationError("invalid pipeline configuration", errors=validation['errors'],
                                 source=str(source) if source else None)

    base_dir = source.parent if source is not None else None
    prover = data['prover']
    oracle_limits = _limits(prover['oracle'])
    saturation_limits = _limits(prover['saturation'])
    levels = data['levels']
    counts = data['counts']
    generation = data['generation']

    return PipelineConfig(
        seed=data['seed'],
        domains=tuple(
            DomainConfig(
                code=domain['code'],
                name=domain.get('name') or DOMAIN_NAMES.get(domain['code'], domain['code']),
                axiom_file=_resolve_axiom_file(domain['axiom_file'], data.get('axiom_root'), base_dir),
            )
            for domain in data['domains']
        ),
        prover=ProverSettings(
            mode=prover['mode'],
            oracle=oracle_limits,
            saturation=saturation_limits,
            eprover=ExternalProverConfig('eprover', prover['eprover']['executable'], prover['eprover']['arguments'],
                                         limits=saturation_limits),
            vampire=ExternalProverConfig('vampire', prover['vampire']['executable'], prover['vampire']['arguments'],
                                         limits=oracle_limits),
            tptp_root=get_config().TPTP_ROOT,
        ),
        rater=RaterConfig.from_dict(data['rater']),
        levels=LevelSettings(
            entailment_k=tuple(levels['entailment_k']),
            selection_k=tuple(levels['selection_k']),
            reconstruction_depths=tuple(levels['reconstruction_depths']),
            matrix=dict(levels.get('matrix') or {}),
        ),
        counts=CountSettings(
            per_configuration=counts['per_configuration'],
            task_kinds=tuple(TaskKind(kind) for kind in counts['task_kinds']),
            levels=tuple(counts['levels']),
        ),
        generation=GenerationSettings(
            retry_budget=generation['retry_budget'],
            balance_labels=bool(generation['balance_labels']),
            strict_distractor_check=bool(generation['strict_distractor_check']),
            workers=generation['workers'],
        ),
        grading=GradingSettings(strict=bool(data['grading']['strict'])),
        source=source,
    )


def load_pipeline_config(path, overrides: Optional[Dict[str, Any]] = None) -> PipelineConfig:
    """
    Load a YAML pipeline config, apply defaults and command-line overrides

    Args:
        path: YAML file
        overrides: seed, prover_mode, workers, axiom_root; None values are ignored

    Returns:
        Validated PipelineConfig
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"config file not found: {path}", error_code='CONFIG_NOT_FOUND', path=str(path))
    try:
        raw = yaml.safe_load(path.read_text(encoding='utf-8')) or {}
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"config file is not valid YAML: {exc}", path=str(path)) from exc
    if not isinstance(raw, dict):
        raise ConfigurationError("config file must hold a mapping", path=str(path))

    data = _merge(_defaults(), raw)
    overrides = {key: value for key, value in (overrides or {}).items() if value is not None}
    if 'seed' in overrides:
        data['seed'] = overrides['seed']
    if 'prover_mode' in overrides:
        data['prover']['mode'] = overrides['prover_mode']
    if 'workers' in overrides:
        data['generation']['workers'] = overrides['workers']
    if 'axiom_root' in overrides:
        data['axiom_root'] = overrides['axiom_root']

    config = build_pipeline_config(data, path)
    logger.debug("loaded pipeline config", path=str(path), domains=[domain.code for domain in config.domains],
                 mode=config.prover.mode)
    return config


def level_matrix(config: PipelineConfig, task_kind: TaskKind) -> Dict[int, DifficultySpec]:
    """
    Difficulty spec of every level: level i uses d=i and the i-th k of the
    kind's k-set; reconstruction uses the i-th depth and k=0. Cells of an
    explicit matrix override either value.
    """
    task_kind = TaskKind(task_kind)
    levels = config.levels
    overrides = levels.matrix.get(task_kind.value) or {}
    specs = {}
    for level in range(1, ConfigValidator.LEVEL_COUNT + 1):
        if task_kind == TaskKind.RECONSTRUCTION:
            d, k = levels.reconstruction_depths[level - 1], 0
        elif task_kind == TaskKind.ENTAILMENT:
            d, k = level, levels.entailment_k[level - 1]
        else:
            d, k = level, levels.selection_k[level - 1]
        cell = overrides.get(level) or {}
        specs[level] = DifficultySpec(level=level, d=cell.get('d', d), k=cell.get('k', k), task_kind=task_kind)
    return specs
