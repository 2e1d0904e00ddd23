"""Simulated traffic load against the tabulated orders, then curve fits.

Run: python3 demos/04_traffic_scaling.py   (about a minute)
"""
from trafficlaw.fitting import rank_models
from trafficlaw.randmodels import ExponentParams, LambdaClass
from trafficlaw.scaling import Regime, scaling_report
from trafficlaw.traffic import simulate_grid, summarize

GRID = [256, 512, 1024, 2048]

# %% Ratio slopes: near zero means the simulated load grows like the table says.
regimes = [Regime.parse(t) for t in ("const:0.5:0.5:0.5", "const:0:3:3", "const:0:2:3", "sqrt:0:1:3")]
for res in scaling_report(regimes, GRID, replicates=4, seed=0):
    print(res.line())

# %% Fit the four functional forms to one load series.
samples = simulate_grid([128, 256, 384, 512, 768, 1024], ExponentParams(i=0.5, s=0.5, d=0.5),
                        LambdaClass.CONST, replicates=2, seed=0)
series = [(n, mean) for n, mean, _ in summarize(samples)]
for model in rank_models(series):
    print(f"{model.law.value:9s} adj R^2 {model.adj_r_squared:.6f}  {model.formula()}")
