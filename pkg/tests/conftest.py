from pathlib import Path

import numpy as np
import pytest

from varclust import load_csv
from varclust.data_model import QualitativeVariable, QuantitativeVariable, VariableSet

DATA_DIR = Path(__file__).resolve().parents[1] / "data"


@pytest.fixture(scope="session")
def decathlon():
    return load_csv(DATA_DIR / "decathlon.csv", quali_columns=[])


@pytest.fixture(scope="session")
def wine():
    return load_csv(DATA_DIR / "wine.csv", quali_columns=["Label", "Soil"])


@pytest.fixture(scope="session")
def wine_ref(wine):
    """Variable subset of the reference run (sensory panel through Harmony)."""
    keep = [n for n in wine.names if n not in ("Overall.quality", "Typical")]
    return wine.subset(keep)


def quant(name, values, missing=None):
    values = np.asarray(values, dtype=float)
    if missing is None:
        missing = np.isnan(values)
    return QuantitativeVariable(name, values, np.asarray(missing, dtype=bool))


def quali(name, labels, na=None):
    levels = []
    codes = []
    for lab in labels:
        if na is not None and lab == na or lab is None:
            codes.append(-1)
            continue
        if lab not in levels:
            levels.append(lab)
        codes.append(levels.index(lab))
    return QualitativeVariable(name, np.array(codes, dtype=np.int64), tuple(levels))


def make_vs(*variables):
    return VariableSet(variables[0].n_obs, tuple(variables))


def make_mixed_dataset(rng, n, p, *, quali_share=0.4, max_levels=4):
    """Random mixed dataset where every level is observed at least once."""
    variables = []
    for j in range(p):
        if rng.random() < quali_share:
            n_levels = int(rng.integers(2, max_levels + 1))
            codes = rng.integers(0, n_levels, size=n)
            # guarantee every level appears
            slots = rng.choice(n, size=n_levels, replace=False)
            codes[slots] = np.arange(n_levels)
            levels = tuple(f"l{t}" for t in range(n_levels))
            variables.append(
                QualitativeVariable(f"q{j}", codes.astype(np.int64), levels)
            )
        else:
            values = rng.normal(size=n)
            variables.append(
                QuantitativeVariable(f"x{j}", values, np.zeros(n, dtype=bool))
            )
    return VariableSet(n, tuple(variables))
