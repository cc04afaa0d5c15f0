import json
import sys

import numpy as np
from scipy.linalg import expm

# Usage: python scripts/sample_rep_generator.py [k] [eps] [seed] > rep.json
k = int(sys.argv[1]) if len(sys.argv) > 1 else 4
eps = float(sys.argv[2]) if len(sys.argv) > 2 else 0.01
seed = int(sys.argv[3]) if len(sys.argv) > 3 else 0

rng = np.random.default_rng(seed)


def skew(k):
    a = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
    x = (a - a.conj().T) / 2
    return x / np.linalg.norm(x)


def as_json(a):
    return {"dim": k, "entries": [[float(z.real), float(z.imag)] for z in a.ravel()]}


# A commuting diagonal pair, each image rotated by exp(eps X)
phases = [rng.random(k) for _ in range(2)]
images = [expm(eps * skew(k)) @ np.diag(np.exp(2j * np.pi * phase)) for phase in phases]

rep = {
    "presentation": {"name": "z^2", "generators": ["a", "b"], "relators": ["a b a' b'"]},
    "dim": k,
    "images": [as_json(image) for image in images],
}

# Pretty print the JSON
print(json.dumps(rep, indent=2))
