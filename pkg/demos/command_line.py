"""
Driving the command-line tool
=============================

Map files are JSON with complex entries as [re, im] pairs. This script writes
two files to a temporary directory and calls the same entry point the
``cbnorm`` console script uses.
"""

import json
import math
import tempfile
from pathlib import Path

from cbnorm.cli import main

tmp = Path(tempfile.mkdtemp())

example = {
    "n": 3,
    "k": 3,
    "representation": {"type": "unitary_diff", "U": {"angles": [3 * math.pi / 4, math.pi, 5 * math.pi / 4]}},
}
(tmp / "example.json").write_text(json.dumps(example))

eye = [[[1.0, 0.0] if i == j else [0.0, 0.0] for j in range(3)] for i in range(3)]
kraus = {"n": 3, "k": 3, "representation": {"type": "kraus", "operators": [eye]}}
(tmp / "kraus_identity.json").write_text(json.dumps(kraus))

for argv in (
    ["closed-form", str(tmp / "example.json")],
    ["cb", str(tmp / "example.json"), "--iterations", "100", "--seed", "7"],
    ["cb", str(tmp / "example.json"), "--iterations", "100", "--refine", "--format", "text"],
    ["is-cp", str(tmp / "kraus_identity.json")],
    ["distance", str(tmp / "example.json"), str(tmp / "example.json"), "--iterations", "50"],
):
    print("$ cbnorm", " ".join(argv))
    code = main(argv)
    print("exit", code)
    print()
