"""Label schema, dataset split, native baseline classifier, and evaluation."""

from .schema import (
    LabeledExample,
    NegativeExample,
    Prediction,
    SplitResult,
    load_labeled,
    read_predictions,
    split_dataset,
    write_predictions,
)
from .metrics import EvalReport, evaluate
from .baseline import BaselineConfig, BaselineModel, train_baseline

__all__ = [
    "LabeledExample",
    "NegativeExample",
    "Prediction",
    "SplitResult",
    "load_labeled",
    "read_predictions",
    "split_dataset",
    "write_predictions",
    "EvalReport",
    "evaluate",
    "BaselineConfig",
    "BaselineModel",
    "train_baseline",
]
