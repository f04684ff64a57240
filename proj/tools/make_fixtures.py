#!/usr/bin/env python3
"""Regenerates the synthetic CSV fixtures under data/.

Each fixture is drawn from a stated model with a fixed seed so the bundled
files are reproducible. The script also re-fits each dataset with a plain
numpy IRLS as an independent sanity check that the frozen truths sit within
three standard errors of the estimates.
"""

import csv
import pathlib

import numpy as np

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"

COVID_BETA = (8.0, 0.02, -0.03)  # intercept, Long_, Lat
POISSON_BETA = (1.0, 0.5, -0.25)  # intercept, x1, x2


def poisson_irls(X, y, iters=50):
    beta = np.zeros(X.shape[1])
    beta[0] = np.log(max(y.mean(), 0.1))
    for _ in range(iters):
        mu = np.exp(X @ beta)
        W = mu
        H = X.T @ (W[:, None] * X)
        g = X.T @ (y - mu)
        beta = beta + np.linalg.solve(H, g)
    cov = np.linalg.inv(X.T @ (np.exp(X @ beta)[:, None] * X))
    return beta, np.sqrt(np.diag(cov))


def check_within_3se(name, X, y, truth):
    beta, se = poisson_irls(X, y)
    err = np.abs(beta - np.asarray(truth))
    if not np.all(err <= 3.0 * se):
        raise SystemExit(f"{name}: |beta_hat - beta| exceeds 3 SE; reseed")
    print(f"{name}: beta_hat={beta}, 3se={3*se}")


def write_covid(rng):
    n = 58
    lat = np.round(rng.uniform(25.0, 49.0, n), 4)
    lon = np.round(rng.uniform(-124.0, -67.0, n), 4)
    b0, b1, b2 = COVID_BETA
    mu = np.exp(b0 + b1 * lon + b2 * lat)
    y = rng.poisson(mu)
    with open(DATA / "covid_synth.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["Province_State", "Lat", "Long_", "Confirmed"])
        for i in range(n):
            w.writerow([f"Region_{i+1:02d}", lat[i], lon[i], int(y[i])])
    X = np.column_stack([np.ones(n), lon, lat])
    check_within_3se("covid_synth", X, y.astype(float), COVID_BETA)


def write_poisson(rng):
    n = 200
    x1 = np.round(rng.uniform(-1.0, 1.0, n), 6)
    x2 = np.round(rng.uniform(-1.0, 1.0, n), 6)
    b0, b1, b2 = POISSON_BETA
    mu = np.exp(b0 + b1 * x1 + b2 * x2)
    y = rng.poisson(mu)
    with open(DATA / "poisson_synth.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["y", "x1", "x2"])
        for i in range(n):
            w.writerow([int(y[i]), x1[i], x2[i]])
    X = np.column_stack([np.ones(n), x1, x2])
    check_within_3se("poisson_synth", X, y.astype(float), POISSON_BETA)


def write_separated():
    zs = [-3.0, -2.5, -2.0, -1.5, -1.0, -0.5, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0]
    with open(DATA / "separated.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["z", "y"])
        for z in zs:
            w.writerow([z, 1 if z > 0 else 0])


def write_tiny():
    with open(DATA / "counts_tiny.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["y"])
        for y in (1, 2, 3):
            w.writerow([y])


def main():
    DATA.mkdir(exist_ok=True)
    write_covid(np.random.default_rng(20240817))
    write_poisson(np.random.default_rng(424242))
    write_separated()
    write_tiny()


if __name__ == "__main__":
    main()
