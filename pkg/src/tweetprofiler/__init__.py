"""Author profiling from tweets.

Per-author tweet collections become rows of a document-term count matrix,
gated by a minimum document frequency, and an RBF-kernel SVM trained by a
from-scratch SMO solver predicts the author's gender and language variety.
"""

from .corpus import (
    AuthorRecord,
    Corpus,
    TruthLabel,
    concat_tweets,
    load_corpus,
    parse_author_xml,
    parse_truth_file,
    write_corpus,
)
from .errors import (
    ConsistencyError,
    CorpusParseError,
    CorpusSchemaError,
    DataError,
    DegenerateTrainingError,
    EmptyVocabularyError,
    LabelValueError,
    ModelFormatError,
    NumericError,
    ParameterError,
    ShapeError,
    StratificationError,
    TruthFormatError,
    TweetProfilerError,
    UndefinedMetricError,
    UsageError,
)
from .evaluation import (
    EvalReport,
    FoldPlan,
    accuracy,
    cross_validate,
    make_folds,
    reports_to_csv,
    sweep_min_df,
)
from .model_io import ProfileModel, load_model, save_model
from .svm import BinaryRbfSvm, RbfSvmClassifier, rbf_gram, rbf_kernel, resolve_gamma
from .synthetic import ClassSignal, SynthSpec, default_synth_spec, generate_synthetic_corpus
from .vectorizer import (
    DocumentTermVectorizer,
    Vocabulary,
    fit_vocabulary,
    tokenize,
    top_terms_by_class,
)

__version__ = "0.1.0"
