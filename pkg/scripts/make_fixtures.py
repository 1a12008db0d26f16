"""Regenerate the JSON fixture files from the closed forms in unimoments.fixtures."""
import json
from pathlib import Path

from unimoments import fixtures
from unimoments.serialize import dumps, matrix_to_json, vector_to_json

OUT = Path(__file__).resolve().parents[1] / "src" / "unimoments" / "fixtures"


def main():
    OUT.mkdir(exist_ok=True)
    for name, build in fixtures.BUILDERS.items():
        (OUT / f"{name}.json").write_text(dumps(matrix_to_json(build()), pretty=True))
    kernel = {"vectors": [vector_to_json(v) for v in fixtures.f6_kernel().T]}
    (OUT / "f6_kernel.json").write_text(dumps(kernel, pretty=True))
    print("wrote", sorted(p.name for p in OUT.glob("*.json")))


if __name__ == "__main__":
    main()
