"""The compiled kernels and the pure-numpy fallbacks must agree."""
import json
import os
import subprocess
import sys

import numpy as np

from xqaoa import _accel

SCRIPT = r"""
import json, numpy as np
from xqaoa import _accel
from xqaoa.analytic import AnsatzObjective
from xqaoa.graphs import generate_regular, brute_force_maxcut
from xqaoa.optimize import init_random, make_rng
from xqaoa.simulator import SimulatorObjective
g = generate_regular(12, 3, 5).with_weights(np.linspace(0.5, 1.5, 18))
out = {"jit": _accel.USE_NUMBA}
for v in ("QAOA", "MA", "XY", "XEQY", "Y"):
    x = init_random(v, g, make_rng(7)).to_vector()
    out["analytic-" + v] = AnsatzObjective(g, v)(x)
    xs = init_random(v, g, make_rng(8), p=2).to_vector()
    val, grad = SimulatorObjective(g, v, 2).value_and_gradient(xs)
    out["sim-" + v] = [val] + list(grad)
out["brute"] = brute_force_maxcut(g).cut_value
print(json.dumps(out))
"""


def _run(disable):
    env = dict(os.environ)
    env.pop("XQAOA_NO_NUMBA", None)
    if disable:
        env["XQAOA_NO_NUMBA"] = "1"
    res = subprocess.run([sys.executable, "-c", SCRIPT], env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def test_numpy_fallback_matches_compiled():
    fast, slow = _run(False), _run(True)
    assert slow["jit"] is False
    assert fast["jit"] is _accel.USE_NUMBA
    for key in fast:
        if key == "jit":
            continue
        assert np.allclose(fast[key], slow[key], rtol=0, atol=1e-10), key
