"""Least-index search over explicit or lazily defined sequences."""

from dataclasses import dataclass

from .errors import DomainError


@dataclass
class FactReport:
    witnesses: list

    @property
    def violations(self):
        return sum(1 for w in self.witnesses if w is None)


def least_index(hit, sequence, max_index=None):
    """Smallest 1-based k with ``hit(sequence[k])``, or None.

    ``sequence`` is either a finite sequence (scanned linearly) or a callable
    ``k -> term``.  Callables must describe a tail-monotone family (once a
    term hits, every later term hits); the search gallops then bisects, so
    indices up to ``max_index`` cost O(log) evaluations.
    """
    if not callable(sequence):
        for k, term in enumerate(sequence, start=1):
            if hit(term):
                return k
        return None
    if max_index is None:
        raise DomainError("a lazily defined sequence needs max_index")
    lo, hi = 0, 1
    while not hit(sequence(hi)):
        if hi >= max_index:
            return None
        lo, hi = hi, min(2 * hi, max_index)
    # hit(hi) holds and hit(lo) fails (or lo == 0)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if hit(sequence(mid)):
            hi = mid
        else:
            lo = mid
    return hi
