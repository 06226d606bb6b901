"""Subjective-feature annotation and regression analysis for argument
corpora: hedge detection over parsed text, ensemble probability
aggregation for storytelling and emotions, and linear/logistic
regression with stepwise AIC selection."""

__version__ = "0.1.0"

from .corpus import Argument, Corpus, StrengthLabel, corpus_summary, load_corpus, save_corpus
from .ensemble import (
    AggregatedFeature,
    PredictionSet,
    aggregate_ensemble,
    feature_distribution,
)
from .features import FeatureTable, TermSpec, build_feature_table, materialize_terms
from .hedging import HedgeAnnotation, HedgeFeatures, annotate_corpus, detect_hedges, hedge_features
from .lexicon import HedgeLexicon, load_lexicon
from .parsing import ParsedDocument, Token, parse_document, parse_text, read_conllu
from .regress import (
    ModelSpec,
    RegressionResult,
    StepwiseTrace,
    fit_linear,
    fit_logistic,
    fit_model,
    nested_gate,
    predict_with_ci,
    stepwise,
)

__all__ = [
    "Argument", "Corpus", "StrengthLabel", "corpus_summary", "load_corpus",
    "save_corpus", "AggregatedFeature", "PredictionSet", "aggregate_ensemble",
    "feature_distribution", "FeatureTable", "TermSpec", "build_feature_table",
    "materialize_terms", "HedgeAnnotation", "HedgeFeatures", "annotate_corpus",
    "detect_hedges", "hedge_features", "HedgeLexicon", "load_lexicon",
    "ParsedDocument", "Token", "parse_document", "parse_text", "read_conllu",
    "ModelSpec", "RegressionResult", "StepwiseTrace", "fit_linear",
    "fit_logistic", "fit_model", "nested_gate", "predict_with_ci", "stepwise",
]
