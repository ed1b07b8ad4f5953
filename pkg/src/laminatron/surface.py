"""Combinatorial model of the five-punctured sphere.

The surface is a sphere with punctures p_0..p_4.  The fundamental group is
free on x_1..x_4, where x_{i+1} is a loop around p_i; the loop around p_4 is
x_5 = (x_1 x_2 x_3 x_4)^{-1}.  The punctures sit in convex position (pentagon
vertices) and the basis loops form a planar spider at a central basepoint, so
the cyclic order of the eight loop-ends around the basepoint is

    x_1, x_1^{-1}, x_2, x_2^{-1}, x_3, x_3^{-1}, x_4, x_4^{-1}.

That ribbon structure determines the circular order on the space of ends of
the Cayley tree, which is what the intersection machinery consumes.  The
face-trace check below certifies that this rotation system really is a
5-punctured sphere (5 boundary cycles carrying the peripheral words).

Curves around two adjacent punctures ("side curves" of the pentagon) are the
building blocks of the twist families:

    side(i) = boundary of a neighborhood of the pentagon side p_i p_{i+1}.
"""

from __future__ import annotations

import numpy as np

from .words import (
    LETTER_DTYPE,
    Substitution,
    canonical_rotation,
    cyclic_key,
    cyclic_reduce,
    invert,
    word,
)

__all__ = ["S05", "SurfaceModel"]


class SurfaceModel:
    """S_{0,5} with its spider ribbon structure and named mapping classes."""

    def __init__(self):
        self.genus = 0
        self.punctures = 5
        self.n_gen = 4
        self.xi = 2  # 3g - 3 + b
        n = self.n_gen
        # slot_letters[s] = letter whose departure uses slot s (ccw order)
        self.slot_letters = [None] * (2 * n)
        for i in range(n):
            self.slot_letters[2 * i] = i + 1
            self.slot_letters[2 * i + 1] = -(i + 1)
        # slot_of[letter + n] -> slot index
        self.slot_of = np.zeros(2 * n + 1, dtype=np.int64)
        for s, l in enumerate(self.slot_letters):
            self.slot_of[l + n] = s
        # rank_after[c, s]: position of slot s in ccw order starting after slot c
        m = 2 * n
        self.rank_after = np.zeros((m, m), dtype=np.int64)
        for c in range(m):
            for s in range(m):
                self.rank_after[c, s] = (s - c) % m - 1  # -1 for s == c, unused
        self._build_peripherals()
        self._check_ribbon()

    # -- peripheral structure ------------------------------------------------

    def _build_peripherals(self):
        n = self.n_gen
        self.puncture_words = [word([i + 1]) for i in range(n)]
        self.puncture_words.append(invert(word(range(1, n + 1))))  # around p_4
        keys = set()
        for w in self.puncture_words:
            keys.add(cyclic_key(w))
            keys.add(cyclic_key(invert(w)))
        self.peripheral_keys = frozenset(keys)

    def is_peripheral(self, w: np.ndarray) -> bool:
        return cyclic_key(w) in self.peripheral_keys

    def is_essential_word(self, w: np.ndarray) -> bool:
        w = cyclic_reduce(w)
        return w.shape[0] > 0 and not self.is_peripheral(w)

    # -- ribbon sanity check ---------------------------------------------------

    def _check_ribbon(self):
        """Trace the boundary cycles of the spider ribbon graph.

        One vertex, n loop edges, rotation = slot order.  The complement must
        consist of 5 faces carrying the puncture words, which pins both the
        genus (0) and the puncture count.
        """
        n = self.n_gen
        m = 2 * n
        nxt = {}
        for s in range(m):
            l = self.slot_letters[s]
            arrive = int(self.slot_of[-l + n])  # slot at which traversing l lands
            nxt[s] = (arrive + 1) % m
        seen = set()
        faces = []
        for s0 in range(m):
            if s0 in seen:
                continue
            s, letters = s0, []
            while s not in seen:
                seen.add(s)
                letters.append(self.slot_letters[s])
                s = nxt[s]
            faces.append(cyclic_key(word(letters)))
        expect = {cyclic_key(w) for w in self.puncture_words}
        expect_inv = {cyclic_key(invert(w)) for w in self.puncture_words}
        got = set(faces)
        if len(faces) != 5 or not (got <= (expect | expect_inv)):
            raise AssertionError("spider rotation system does not give S_{0,5}")

    # -- named curves ----------------------------------------------------------

    def side_curve_word(self, i: int) -> np.ndarray:
        """Word of the curve around punctures p_i, p_{i+1} (indices mod 5)."""
        i %= 5
        return cyclic_reduce(
            np.concatenate([self._loop_word(i), self._loop_word((i + 1) % 5)])
        )

    def _loop_word(self, t: int) -> np.ndarray:
        return self.puncture_words[t]

    def block_curve_word(self, block: tuple[int, ...]) -> np.ndarray:
        """Curve around a cyclic interval of punctures (in cyclic order)."""
        return cyclic_reduce(np.concatenate([self._loop_word(t % 5) for t in block]))

    # -- mapping classes --------------------------------------------------------

    def rotation_step(self) -> Substitution:
        """Order-5 step p_i -> p_{i+1} (angle 2*pi/5)."""
        n = self.n_gen
        x5 = invert(word(range(1, n + 1)))
        images = [word([i + 2]) for i in range(n - 1)] + [x5]
        return Substitution(images, name="r")

    def rotation_step_inv(self) -> Substitution:
        n = self.n_gen
        x5 = invert(word(range(1, n + 1)))
        images = [x5] + [word([i + 1]) for i in range(n - 1)]
        return Substitution(images, name="r^-1")

    def half_twist(self, i: int) -> Substitution:
        """Half twist exchanging p_{i-1} and p_i, for i in 1..4."""
        n = self.n_gen
        if not 1 <= i <= n:
            raise ValueError("half twist index out of range")
        images = [word([j + 1]) for j in range(n)]
        if i < n:
            images[i - 1] = word([i, i + 1, -i])
            images[i] = word([i])
        else:
            images[n - 1] = word([-(n - 1), -(n - 2), -(n - 3), -n])
        return Substitution(images, name=f"s{i}")

    def half_twist_inv(self, i: int) -> Substitution:
        n = self.n_gen
        if not 1 <= i <= n:
            raise ValueError("half twist index out of range")
        images = [word([j + 1]) for j in range(n)]
        if i < n:
            images[i - 1] = word([i + 1])
            images[i] = word([-(i + 1), i, i + 1])
        else:
            images[n - 1] = word([-n, -(n - 1), -(n - 2), -(n - 3)])
        return Substitution(images, name=f"s{i}^-1")

    def block_twist(self, block: tuple[int, ...], power: int) -> Substitution:
        """Dehn twist about the round curve enclosing the puncture block.

        ``block`` is a cyclic interval of puncture indices.  Blocks containing
        p_4 are replaced by their complement (same curve, same twist).  The
        positive twist conjugates each enclosed loop by the block product.
        """
        blk = tuple(t % 5 for t in block)
        if not 1 <= len(blk) <= 4:
            raise ValueError("block size must be 1..4")
        if 4 in blk:
            blk = tuple(t for t in range(5) if t not in blk)
            if 4 in blk or not blk:
                raise ValueError("block must be a proper cyclic interval")
        # blk is now within p_0..p_3 and must be consecutive there
        blk = tuple(sorted(blk))
        if any(blk[j + 1] - blk[j] != 1 for j in range(len(blk) - 1)):
            raise ValueError(f"puncture block {block} is not a cyclic interval")
        gens = [t + 1 for t in blk]  # generator indices x_{t+1}
        u = word(gens)
        e = int(power)
        images = []
        for g in range(1, self.n_gen + 1):
            if g in gens:
                if e >= 0:
                    im = np.concatenate([np.tile(u, e), word([g]), np.tile(invert(u), e)])
                else:
                    im = np.concatenate([np.tile(invert(u), -e), word([g]), np.tile(u, -e)])
                images.append(word(im))
            else:
                images.append(word([g]))
        return Substitution(images, name=f"T{blk}^{e}")

    # -- class bookkeeping -------------------------------------------------------

    @staticmethod
    def class_key(w: np.ndarray) -> bytes:
        return cyclic_key(w)

    @staticmethod
    def canonical(w: np.ndarray) -> np.ndarray:
        return canonical_rotation(cyclic_reduce(w))


S05 = SurfaceModel()
