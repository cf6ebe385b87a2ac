"""Spike-and-wave detection in EEG from t-location-scale features and kNN."""

from .knn import (
    KnnConfig,
    LabeledDataset,
    Prediction,
    ScalingSpec,
    classify,
    classify_batch,
    fit_scaling,
)
from .metrics import ConfusionMatrix, Rates, confusion, rates
from .optimizer import MinimizeResult, SimplexConfig, nelder_mead
from .signal_io import (
    Annotation,
    FeatureTable,
    Recording,
    load_annotations,
    load_feature_table,
    load_model,
    load_recording,
    save_annotations,
    save_feature_table,
    save_model,
    save_recording,
)
from .synth import SwdEvent, SynthSpec, generate, make_corpus
from .tls_model import (
    FitConfig,
    FitReport,
    TlsParams,
    fit_mle,
    neg_log_likelihood,
    tls_log_pdf,
    tls_pdf,
    tls_sample,
)
from .windowing import Segment, WindowSpec, label_segment, segment_channel

__version__ = "0.1.0"
