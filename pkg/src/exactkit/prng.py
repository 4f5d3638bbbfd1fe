"""Deterministic PRNG: xorshift64* v1.

Every randomized suite in the package draws from this generator so that
reports are reproducible across machines and implementations.  The exact
update rule, with s the 64-bit state (seed 0 is remapped to
0x9E3779B97F4A7C15):

    s ^= s >> 12
    s ^= (s << 25) & 0xFFFFFFFFFFFFFFFF
    s ^= s >> 27
    output = (s * 0x2545F4914F6CDD1D) & 0xFFFFFFFFFFFFFFFF

Bounded draws use plain modulo reduction (randrange(n) = output % n);
the small bias is irrelevant for testing and keeps the rule portable.
"""

_MASK = 0xFFFFFFFFFFFFFFFF
_MULT = 0x2545F4914F6CDD1D
_ZERO_SEED = 0x9E3779B97F4A7C15

PRNG_NAME = "xorshift64star-v1"


class Xorshift64Star:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = (seed & _MASK) or _ZERO_SEED

    def next_u64(self) -> int:
        s = self.state
        s ^= s >> 12
        s ^= (s << 25) & _MASK
        s ^= s >> 27
        self.state = s
        return (s * _MULT) & _MASK

    def randrange(self, n: int) -> int:
        if n <= 0:
            raise ValueError("randrange needs n >= 1")
        return self.next_u64() % n

    def choice(self, seq):
        if not seq:
            raise ValueError("choice from an empty sequence")
        return seq[self.randrange(len(seq))]

    def spawn(self) -> "Xorshift64Star":
        """Independent child stream (deterministic from current state)."""
        return Xorshift64Star(self.next_u64())
