"""Pure-Python backtracking kernel for isometry search.

Mirrors ``_isosearch.pyx``; used when the compiled module is missing or
``MCG4_PURE_PYTHON`` is set.

A :class:`SearchTable` is built once per lattice from

``inner``
    ``C x C`` table of pairings between candidate vectors,
``offsets``, ``flat``
    candidates for column ``j`` are ``flat[offsets[j]:offsets[j + 1]]``,
``gram``
    the ``n x n`` target Gram matrix,

and then queried with prefixes: candidate indices already fixed for the
first columns.
"""


class SearchTable:
    def __init__(self, inner, offsets, flat, gram):
        self.inner = [list(r) for r in inner]
        self.gram = [list(r) for r in gram]
        self.lists = [list(flat[offsets[j]:offsets[j + 1]]) for j in range(len(offsets) - 1)]
        self.n = len(self.lists)

    def _consistent(self, chosen, a, depth):
        row = self.inner[a]
        gram = self.gram
        for i in range(depth):
            if row[chosen[i]] != gram[i][depth]:
                return False
        return True

    def _start(self, prefix):
        chosen = list(prefix)
        for d in range(len(chosen)):
            if not self._consistent(chosen, chosen[d], d):
                return None
        return chosen + [0] * (self.n - len(chosen))

    def find_completion(self, prefix):
        """First completion of ``prefix`` to a full isometry, or ``None``."""
        chosen = self._start(prefix)
        if chosen is None:
            return None
        n, lists = self.n, self.lists

        def dfs(depth):
            if depth == n:
                return True
            for a in lists[depth]:
                if self._consistent(chosen, a, depth):
                    chosen[depth] = a
                    if dfs(depth + 1):
                        return True
            return False

        return chosen if dfs(len(prefix)) else None

    def count_completions(self, prefix):
        """Number of completions of ``prefix`` (a brute-force group order)."""
        chosen = self._start(prefix)
        if chosen is None:
            return 0
        n, lists = self.n, self.lists

        def dfs(depth):
            if depth == n:
                return 1
            total = 0
            for a in lists[depth]:
                if self._consistent(chosen, a, depth):
                    chosen[depth] = a
                    total += dfs(depth + 1)
            return total

        return dfs(len(prefix))
