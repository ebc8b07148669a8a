"""Emotion classification with a GRU + attention network written in numpy.

Modules:

* ``tensor``      float64 helpers, stable softmax/sigmoid, finite differences
* ``layers``      GRU, attention, dense stack, dropout; forward and backward
* ``features``    tweet preprocessing, SentiWordNet and NRC lexicon features
* ``data``        corpus loaders, vocabulary, splits, batches, word vectors
* ``training``    Adam, early stopping, repeated-run experiments
* ``evaluation``  lexicon baseline, confusion matrix, precision/recall/F1
* ``checkpoint``  model file format
* ``cli``         the ``emogru`` command
"""

from .data import Example, Vocabulary, encode, encode_dataset, featurize, split
from .evaluation import Metrics, baseline_classify, compute_metrics, confusion
from .features import FeatureBundle, normalize, preprocess, tokenize
from .layers import ModelConfig, ModelParams, model_backward, model_forward
from .training import TrainConfig, adam_step, run_experiment, train

__version__ = "0.1.0"
