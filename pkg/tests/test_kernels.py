import json
import os
import subprocess
import sys

SCRIPT = """
import json, random, sys
from vkh.snf import SparseMatrix, invariant_factors
from vkh import _kernels
rng = random.Random(int(sys.argv[1]))
out = []
for _ in range(12):
    n, m = rng.randint(1, 7), rng.randint(1, 7)
    M = SparseMatrix(n, m)
    for i in range(n):
        for j in range(m):
            M.add(i, j, rng.randint(-20, 20))
    out.append(invariant_factors(M, certify=True))
print(json.dumps({"have_numba": _kernels.HAVE_NUMBA, "factors": out}))
"""


def _run(no_numba: bool, seed: int = 424):
    env = dict(os.environ)
    if no_numba:
        env["VKH_NO_NUMBA"] = "1"
    else:
        env.pop("VKH_NO_NUMBA", None)
    res = subprocess.run([sys.executable, "-c", SCRIPT, str(seed)],
                         capture_output=True, text=True, env=env,
                         check=True)
    return json.loads(res.stdout)


def test_fallback_matches_jitted_kernel():
    fast = _run(no_numba=False)
    slow = _run(no_numba=True)
    assert slow["have_numba"] is False
    assert fast["factors"] == slow["factors"]
