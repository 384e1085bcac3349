"""From-scratch classifiers: RF, DT, LR, SVM and Gaussian NB."""
from .base import (
    DEFAULT_GRIDS,
    DEFAULTS,
    KINDS,
    AlgorithmSpec,
    DimensionMismatch,
    GridSearchResult,
    SingleClassData,
    TooFewInstances,
    TrainedModel,
    expand_grid,
    grid_search,
    normalize_kind,
    predict,
    predict_many,
    stratified_kfold,
    train,
    train_production,
)

__all__ = [
    "DEFAULT_GRIDS", "DEFAULTS", "KINDS", "AlgorithmSpec", "DimensionMismatch", "GridSearchResult",
    "SingleClassData", "TooFewInstances", "TrainedModel", "expand_grid", "grid_search",
    "normalize_kind", "predict", "predict_many", "stratified_kfold", "train", "train_production",
]
