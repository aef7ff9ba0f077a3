"""Permutations of {0, 1, 2, 3}.

Instances are interned: there are exactly 24 ``Perm4`` objects, so identity
comparison, hashing and composition are all table lookups.
"""
from __future__ import annotations

from itertools import permutations

__all__ = ["Perm4", "S4", "ORDERED_S4", "IDENTITY", "edge_number", "EDGE_VERTICES"]


def _parity(images: tuple[int, ...]) -> int:
    inv = sum(1 for i in range(4) for j in range(i + 1, 4) if images[i] > images[j])
    return inv & 1


_LEX = list(permutations(range(4)))
# Signature ordering: lexicographic pairs with the even member first, so that
# even permutations sit at even indices.
_SIG = []
for _k in range(0, 24, 2):
    _a, _b = _LEX[_k], _LEX[_k + 1]
    _SIG.extend([_a, _b] if _parity(_a) == 0 else [_b, _a])

_BY_IMAGES: dict[tuple[int, ...], "Perm4"] = {}


class Perm4:
    """A permutation of the four vertices of a tetrahedron.

    ``p[i]`` is the image of ``i``; ``(p * q)[i] == p[q[i]]``.
    """

    __slots__ = ("images", "index", "lex_index", "sign", "_inv", "_mul")

    def __new__(cls, *images):
        if len(images) == 1 and not isinstance(images[0], int):
            images = tuple(images[0])
        if not images:
            images = (0, 1, 2, 3)
        try:
            return _BY_IMAGES[tuple(images)]
        except KeyError:
            raise ValueError(f"not a permutation of 0..3: {images!r}") from None

    @classmethod
    def _make(cls, images: tuple[int, ...]) -> "Perm4":
        p = object.__new__(cls)
        p.images = images
        p.sign = -1 if _parity(images) else 1
        return p

    def __getitem__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Perm4") -> "Perm4":
        return self._mul[other.index]

    def inverse(self) -> "Perm4":
        return self._inv

    def pre_image_of(self, i: int) -> int:
        return self._inv.images[i]

    def __iter__(self):
        return iter(self.images)

    def __repr__(self) -> str:
        return "Perm4(" + "".join(map(str, self.images)) + ")"

    def __str__(self) -> str:
        return "".join(map(str, self.images))

    def __lt__(self, other: "Perm4") -> bool:
        return self.lex_index < other.lex_index

    def __reduce__(self):
        return (Perm4, (self.images,))

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self

    @staticmethod
    def transposition(a: int, b: int) -> "Perm4":
        im = [0, 1, 2, 3]
        im[a], im[b] = im[b], im[a]
        return Perm4(tuple(im))


S4: list[Perm4] = [Perm4._make(t) for t in _SIG]
for _i, _p in enumerate(S4):
    _p.index = _i
    _BY_IMAGES[_p.images] = _p
ORDERED_S4: list[Perm4] = [_BY_IMAGES[t] for t in _LEX]
for _i, _p in enumerate(ORDERED_S4):
    _p.lex_index = _i
for _p in S4:
    _p._inv = _BY_IMAGES[tuple(_p.images.index(i) for i in range(4))]
    _p._mul = [_BY_IMAGES[tuple(_p.images[_q.images[i]] for i in range(4))] for _q in S4]

IDENTITY = S4[0]

# Edge numbering: 0:01 1:02 2:03 3:12 4:13 5:23
EDGE_VERTICES: tuple[tuple[int, int], ...] = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
_EDGE_NUM = [[-1] * 4 for _ in range(4)]
for _e, (_a, _b) in enumerate(EDGE_VERTICES):
    _EDGE_NUM[_a][_b] = _EDGE_NUM[_b][_a] = _e


def edge_number(a: int, b: int) -> int:
    return _EDGE_NUM[a][b]
