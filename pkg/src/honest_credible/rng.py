"""Counter-based random streams.

Every random quantity in the package is drawn from a :class:`Stream`, which is
identified by ``(master_seed, n, replicate, purpose)``.  The identifier is
hashed into the key of a Philox generator, so a stream can be re-created from
its identifier alone and streams for different replicates never overlap or
depend on evaluation order.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Stream:
    master_seed: int
    purpose: str
    n: float | None = None
    replicate: int | None = None

    @property
    def key(self) -> str:
        n = "-" if self.n is None else repr(float(self.n))
        rep = "-" if self.replicate is None else str(int(self.replicate))
        return f"{int(self.master_seed)}|{n}|{rep}|{self.purpose}"

    @property
    def tag(self) -> str:
        """Short stable hex id, written into output rows."""
        return hashlib.blake2b(self.key.encode(), digest_size=8).hexdigest()

    def generator(self) -> np.random.Generator:
        digest = hashlib.blake2b(self.key.encode(), digest_size=16).digest()
        words = np.frombuffer(digest, dtype="<u4")
        seq = np.random.SeedSequence([int(w) for w in words])
        return np.random.Generator(np.random.Philox(seq))

    def child(self, purpose: str) -> "Stream":
        return Stream(self.master_seed, f"{self.purpose}/{purpose}", self.n, self.replicate)


def derive(master_seed: int, purpose: str, n: float | None = None,
           replicate: int | None = None) -> Stream:
    return Stream(int(master_seed), purpose, n, replicate)


def as_generator(stream) -> np.random.Generator:
    """Accept a Stream, a Generator or an int seed."""
    if isinstance(stream, Stream):
        return stream.generator()
    if isinstance(stream, np.random.Generator):
        return stream
    return Stream(int(stream), "default").generator()
