"""egvi: word sense induction and disambiguation over pre-trained embeddings."""

from ._kernels import backend_name
from .disambig import disambiguate, disambiguate_text, relatedness, tokenize
from .egograph import EgoGraph, anti_pair, build_ego_graph
from .inventory import (
    SenseInventory,
    build_inventory,
    induce_senses,
    load_inventory,
    save_inventory,
    sense_vector,
)
from .vectorstore import EmbeddingMatrix, cosine, load_embeddings, top_k, vector
from .whispers import Clustering, chinese_whispers

__version__ = "0.1.0"

__all__ = [
    "EmbeddingMatrix",
    "EgoGraph",
    "Clustering",
    "SenseInventory",
    "anti_pair",
    "backend_name",
    "build_ego_graph",
    "build_inventory",
    "chinese_whispers",
    "cosine",
    "disambiguate",
    "disambiguate_text",
    "induce_senses",
    "load_embeddings",
    "load_inventory",
    "relatedness",
    "save_inventory",
    "sense_vector",
    "tokenize",
    "top_k",
    "vector",
]
