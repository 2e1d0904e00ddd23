"""Which scaling law does each parameter cell give?

Run: python3 demos/03_theory_tables.py
"""
from trafficlaw.randmodels import ExponentParams, LambdaClass
from trafficlaw.theory import LawKind, classify_law

SYMBOL = {LawKind.SARNOFF: "S", LawKind.ODLYZKO: "O", LawKind.METCALFE: "M", LawKind.CUBE: "C",
          LawKind.OTHER: "."}
S_VALUES = [0, 0.5, 1, 1.5, 2, 2.5, 3]
D_VALUES = [0, 0.5, 1, 1.25, 1.5, 1.75, 2, 2.5, 3]

# %% Law map over (s, d) for a few influence exponents.
# S=Sarnoff n, O=Odlyzko n log n, M=Metcalfe n^2, C=cube n^3, .=other
for lam in (LambdaClass.CONST, LambdaClass.SQRT_N):
    for i in (0.0, 0.5, 2.0, 3.0):
        print(f"\nlambda={lam.value} i={i}")
        print("  d\\s " + " ".join(f"{s:>4g}" for s in S_VALUES))
        for d in D_VALUES:
            row = [SYMBOL[classify_law(lam, ExponentParams(i=i, s=s, d=d)).law] for s in S_VALUES]
            print(f"  {d:>4g} " + " ".join(f"{c:>4}" for c in row))

# %% The exact order behind a cell.
cls = classify_law(LambdaClass.CONST, ExponentParams(i=0, s=1, d=3))
print(f"\n(const, i=0, s=1, d=3): {cls.order}  law={cls.law.value}")
