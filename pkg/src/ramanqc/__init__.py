"""Quality indices for continuous buckypaper manufacturing from Raman spectra."""

from .charts import ChartSeries, cusum, estimate_in_control, ewma
from .config import RunConfig
from .consistency import (
    ConsistencyFeatures,
    InconsistencyIndex,
    MmcResult,
    build_features,
    inconsistency_index,
    mmc_cluster,
)
from .decomposition import (
    DecomposedEffects,
    DecompositionConfig,
    decompose_baseline,
    defect_summary,
    load_effects,
    write_effects,
)
from .design import SamplingPlan, maximin_lhd, write_plan
from .errors import (
    DegenerateGeometryError,
    GridMismatchError,
    IngestionError,
    InsufficientDataError,
    RamanQCError,
    UndefinedNormalizationError,
)
from .pipeline import assess, effects_from_dataset
from .quality import QualityReport, overall_quality, rank_and_flag
from .similarity import (
    SimilarityParams,
    cross_correlation,
    dissimilarity,
    weighted_similarity,
)
from .spectra import (
    Dataset,
    RamanProfile,
    SampleGroup,
    ShiftGrid,
    load_dataset,
    validate,
    write_dataset,
)
from .uniformity import UniformityResult, similarity_matrix, uniformity, uniformity_index

__version__ = "0.1.0"
