"""Pure-Python longest-common-subsequence kernel (fallback backend)."""

from __future__ import annotations


def lcs_length(s1, s2) -> int:
    """Length of the LCS of two token sequences, O(n*m) rolling-row DP."""
    n, m = len(s1), len(s2)
    if n == 0 or m == 0:
        return 0
    if m > n:  # keep the inner row short
        s1, s2, n, m = s2, s1, m, n
    prev = [0] * (m + 1)
    curr = [0] * (m + 1)
    for i in range(1, n + 1):
        a = s1[i - 1]
        for j in range(1, m + 1):
            if a == s2[j - 1]:
                curr[j] = prev[j - 1] + 1
            else:
                pj = prev[j]
                cj = curr[j - 1]
                curr[j] = pj if pj >= cj else cj
        prev, curr = curr, prev
    return prev[m]
