"""Denoise-then-classify pipeline on cluster-averaged features."""
from .classifier import LinearModel, hinge_loss, train_classifier
from .cv import MODES, CVReport, cross_validate, fit_fold, stratified_folds
from .dataset import Dataset, align_to_graph, load_dataset, read_dataset, reduce_dataset
from .metrics import auprc, auroc
from .synthetic import synthetic_dataset

__all__ = [
    "Dataset", "load_dataset", "read_dataset", "align_to_graph", "reduce_dataset",
    "LinearModel", "train_classifier", "hinge_loss",
    "auroc", "auprc",
    "MODES", "CVReport", "cross_validate", "fit_fold", "stratified_folds",
    "synthetic_dataset",
]
