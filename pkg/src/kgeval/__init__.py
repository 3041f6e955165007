"""Keyphrase-generation evaluation toolkit.

Fine-grained and exact-match metrics for keyphrase prediction, corpus
evaluation with macro-averaged reports, and a streaming reward service
for reinforcement-learning trainers.
"""

from .corpus import (
    CorpusReport,
    EvalConfig,
    Instance,
    JoinError,
    ParseError,
    ScorerTuple,
    evaluate_corpus,
    export_scorer_corpus,
    load_corpus,
)
from .exact import (
    PRF,
    MatchVector,
    MissingDocument,
    dedup,
    f1_at_5,
    f1_at_k,
    f1_at_m,
    match_predictions,
    split_present_absent,
    token_corpus_prf,
)
from .finegrained import (
    InstanceScore,
    WordBudget,
    fg_score,
    quantity_coefficient,
    repetition_penalty,
)
from .service import (
    RewardRequest,
    RewardResponse,
    batch_reward,
    compute_reward,
    serve,
)
from .similarity import (
    FunctionScorer,
    InternalPairScorer,
    PairScore,
    ScoreEntry,
    ScoreList,
    ScorerUnavailable,
    SubprocessScorer,
    ed_score,
    edit_distance,
    pair_score,
    score_list,
    score_list_external,
    token_edit_distance,
    token_f1,
)
from .textnorm import (
    Document,
    EmptyPhrase,
    Phrase,
    Token,
    is_present,
    normalize_document,
    normalize_phrase,
    stem,
    tokenize,
)

__version__ = "0.1.0"
