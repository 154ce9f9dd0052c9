"""Detect and rank lexical semantic change between two diachronic corpora.

The toolkit takes pre-extracted contextual embeddings of target-word
occurrences (one set per word and corpus), clusters them into senses, and
derives per-word change verdicts and graded change scores from how the
clusters are populated by each corpus.
"""

from .store import (
    EmbeddingSet,
    Manifest,
    ManifestEntry,
    load_manifest,
    load_word_pair,
    read_embedding_set,
    save_manifest,
    write_embedding_set,
)
from .cluster import ClusterConfig, Clustering, kmeans, select_and_cluster, silhouette_score
from .matching import CostMatrix, Matching, build_cost_matrix, hungarian
from .measures import (
    ChangeVerdict,
    DecisionThresholds,
    SenseCounts,
    SenseDistribution,
    ShiftScore,
    Witness,
    change_coefficient,
    decide_change,
    sj_distance,
    smooth,
)
from .pipeline import BatchResult, PipelineConfig, WordResult, run_corpus_pair, run_method1, run_method2
from .evaluate import accuracy, read_gold, spearman

__version__ = "0.1.0"
