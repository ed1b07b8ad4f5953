"""Free-group words over the surface basis, as numpy int8 arrays.

A letter is a nonzero int8: +i for the generator x_i, -i for its inverse
(SnapPy-style list words).  Words are kept freely reduced; conjugacy classes
are represented by cyclically reduced words with a canonical (least) rotation
for hashing and equality.

The hot paths (substitution, free reduction) are numba kernels because family
generation materializes words with tens of millions of letters.
"""

from __future__ import annotations

import os
import numpy as np

try:  # pragma: no cover - exercised implicitly everywhere
    if os.environ.get("LAMINATRON_NO_NUMBA"):
        raise ImportError
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap

LETTER_DTYPE = np.int8


class WordBudgetExceeded(RuntimeError):
    """Raised when a word operation would exceed the configured letter budget."""

    def __init__(self, needed: int, budget: int):
        super().__init__(f"word length {needed} exceeds budget {budget}")
        self.needed = int(needed)
        self.budget = int(budget)


def word(letters) -> np.ndarray:
    w = np.asarray(letters, dtype=LETTER_DTYPE)
    if w.ndim != 1:
        raise ValueError("a word is a 1-d letter array")
    if np.any(w == 0):
        raise ValueError("letter 0 is not allowed")
    return w


def parse_word(text: str) -> np.ndarray:
    """Parse "x1.x2^-1.x3" (also accepts unicode inverse superscript)."""
    text = text.strip()
    if not text:
        return np.zeros(0, dtype=LETTER_DTYPE)
    out = []
    for tok in text.replace("⁻¹", "^-1").split("."):
        tok = tok.strip()
        neg = tok.endswith("^-1")
        if neg:
            tok = tok[:-3]
        if not tok.startswith("x"):
            raise ValueError(f"bad letter token {tok!r}")
        i = int(tok[1:])
        out.append(-i if neg else i)
    return word(out)


def format_word(w: np.ndarray) -> str:
    return ".".join(f"x{abs(int(l))}" + ("^-1" if l < 0 else "") for l in w)


@njit(cache=True)
def _free_reduce_kernel(w):
    out = np.empty_like(w)
    top = -1
    for i in range(w.shape[0]):
        l = w[i]
        if top >= 0 and out[top] == -l:
            top -= 1
        else:
            top += 1
            out[top] = l
    return out[: top + 1].copy()


def free_reduce(w: np.ndarray) -> np.ndarray:
    if w.shape[0] == 0:
        return w
    return _free_reduce_kernel(w)


def cyclic_reduce(w: np.ndarray) -> np.ndarray:
    """Freely reduce, then cancel matching inverse letters at opposite ends."""
    w = free_reduce(w)
    i, j = 0, w.shape[0]
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j].copy()


def invert(w: np.ndarray) -> np.ndarray:
    return (-w[::-1]).copy()


@njit(cache=True)
def _least_rotation(w):
    # Booth's algorithm on the doubled word.
    n = w.shape[0]
    f = np.full(2 * n, -1, dtype=np.int64)
    k = 0
    for j in range(1, 2 * n):
        sj = w[j % n]
        i = f[j - k - 1]
        while i != -1 and sj != w[(k + i + 1) % n]:
            if sj < w[(k + i + 1) % n]:
                k = j - i - 1
            i = f[i]
        if sj != w[(k + i + 1) % n]:
            if sj < w[(k + i + 1) % n]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k


def canonical_rotation(w: np.ndarray) -> np.ndarray:
    """Least cyclic rotation of a cyclically reduced word."""
    n = w.shape[0]
    if n <= 1:
        return w.copy()
    k = int(_least_rotation(w))
    return np.concatenate([w[k:], w[:k]])


def cyclic_key(w: np.ndarray) -> bytes:
    return canonical_rotation(cyclic_reduce(w)).tobytes()


def unoriented_key(w: np.ndarray) -> bytes:
    """Key identifying a conjugacy class together with its inverse class."""
    a = cyclic_key(w)
    b = cyclic_key(invert(w))
    return min(a, b)


def primitive_root_length(w: np.ndarray) -> int:
    """Length of the primitive root of a cyclically reduced word (as a cyclic word)."""
    n = w.shape[0]
    if n == 0:
        return 0
    # KMP failure function gives the smallest period of the linear word; the
    # cyclic word is a proper power iff that period divides n and is < n.
    fail = np.zeros(n, dtype=np.int64)
    k = 0
    for i in range(1, n):
        while k > 0 and w[i] != w[k]:
            k = fail[k - 1]
        if w[i] == w[k]:
            k += 1
        fail[i] = k
    period = n - int(fail[n - 1])
    if period < n and n % period == 0:
        return period
    return n


def is_primitive(w: np.ndarray) -> bool:
    return primitive_root_length(w) == w.shape[0]


@njit(cache=True)
def _substitute_kernel(w, img_flat, img_off, img_len, n_gen, total):
    out = np.empty(total, dtype=np.int8)
    pos = 0
    for i in range(w.shape[0]):
        idx = w[i] + n_gen  # letters -n..-1,1..n -> 0..2n (slot n unused)
        o = img_off[idx]
        ln = img_len[idx]
        out[pos : pos + ln] = img_flat[o : o + ln]
        pos += ln
    return out


class Substitution:
    """An endomorphism of the free group given by letter images.

    ``images[i]`` is the image word of generator x_{i+1}; inverse letters map
    to the inverted image.  Substitutions coming from mapping classes are
    automorphisms, but nothing here requires that.
    """

    def __init__(self, images: list[np.ndarray], name: str = ""):
        self.n_gen = len(images)
        self.name = name
        self.images = [word(im) for im in images]
        n = self.n_gen
        table: list[np.ndarray] = [np.zeros(0, dtype=LETTER_DTYPE)] * (2 * n + 1)
        for i, im in enumerate(self.images):
            table[(i + 1) + n] = im
            table[(-(i + 1)) + n] = invert(im)
        self._tab = table
        self._len = np.array([t.shape[0] for t in table], dtype=np.int64)
        self._off = np.zeros(2 * n + 1, dtype=np.int64)
        np.cumsum(self._len[:-1], out=self._off[1:])
        self._flat = (
            np.concatenate(table) if any(t.shape[0] for t in table) else np.zeros(0, dtype=LETTER_DTYPE)
        )

    def output_length(self, w: np.ndarray) -> int:
        if w.shape[0] == 0:
            return 0
        counts = np.bincount((w.astype(np.int64) + self.n_gen), minlength=2 * self.n_gen + 1)
        return int(np.dot(counts, self._len))

    def apply(self, w: np.ndarray, budget: int | None = None) -> np.ndarray:
        total = self.output_length(w)
        if budget is not None and total > budget:
            raise WordBudgetExceeded(total, budget)
        if total == 0:
            return np.zeros(0, dtype=LETTER_DTYPE)
        out = _substitute_kernel(w, self._flat, self._off, self._len, self.n_gen, total)
        return free_reduce(out)

    def __repr__(self):
        return f"Substitution({self.name or 'anon'})"


def concat(*ws: np.ndarray) -> np.ndarray:
    parts = [w for w in ws if w.shape[0] > 0]
    if not parts:
        return np.zeros(0, dtype=LETTER_DTYPE)
    return free_reduce(np.concatenate(parts))


def power(w: np.ndarray, e: int, budget: int | None = None) -> np.ndarray:
    """w^e for a reduced word w, via tiling (w need not be cyclically reduced)."""
    if e == 0 or w.shape[0] == 0:
        return np.zeros(0, dtype=LETTER_DTYPE)
    base = w if e > 0 else invert(w)
    n = abs(int(e)) * base.shape[0]
    if budget is not None and n > budget:
        raise WordBudgetExceeded(n, budget)
    return free_reduce(np.tile(base, abs(int(e))))
