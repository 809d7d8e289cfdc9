"""Seeding and serialization helpers"""

from .seeding import SeedLike, as_rng, derive_rng, derive_seed, tag_entropy
from .serialization import to_jsonable, write_json, write_rows_csv, write_vector_csv

__all__ = [
    'SeedLike',
    'as_rng',
    'derive_rng',
    'derive_seed',
    'tag_entropy',
    'to_jsonable',
    'write_json',
    'write_rows_csv',
    'write_vector_csv',
]
