"""Which diagonal ninth-root qutrit gates conjugate X into the Clifford group.

Run: python3 demos/qutrit_t_gates.py
"""

from collections import Counter

from znlgt.circuits import qutrit_t_nogo

rep = qutrit_t_nogo()
print(f"T X T^dagger Clifford: {rep.txt_clifford}/729, T Clifford: {rep.t_clifford}/729")
kinds = Counter((c["txt_clifford"], c["t_clifford"]) for c in rep.counterexamples)
for (txt, t), n in sorted(kinds.items()):
    print(f"  TXT^dagger Clifford={txt!s:5} T Clifford={t!s:5}: {n} triples outside 'a = b = c mod 3'")
sums = Counter(sum(c["abc"]) % 3 for c in rep.counterexamples if c["txt_clifford"])
print(f"  a+b+c mod 3 among Clifford-conjugating counterexamples: {dict(sums)}")
