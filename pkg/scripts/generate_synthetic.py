#!/usr/bin/env python3
"""
Write synthetic TIR programs to disk for manual runs and timing.

    python scripts/generate_synthetic.py scale out/scale
    python scripts/generate_synthetic.py planted out/planted --count 200
    python scripts/generate_synthetic.py slices out/slices --count 100
"""
import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from bench.synthetic import (  # noqa: E402
    instruction_count,
    planted_refinement_corpus,
    random_slice_program,
    scale_project,
)


def write_scale(out: Path, classes: int, instructions: int) -> None:
    total = 0
    for name, text in scale_project(classes, instructions):
        (out / name).write_text(text, encoding="utf-8")
        total += instruction_count(text)
    print(f"✓ {classes} classes, {total} instructions in {out}")


def write_planted(out: Path, count: int, seed: int) -> None:
    answers = {}
    for case in planted_refinement_corpus(count, seed):
        name = f"planted{case.seed:04d}.tir"
        (out / name).write_text(case.text, encoding="utf-8")
        answers[name] = [asdict(p) for p in case.planted]
    (out / "planted.json").write_text(json.dumps(answers, indent=2, ensure_ascii=False), encoding="utf-8")
    print(f"✓ {count} planted programs in {out}")


def write_slices(out: Path, count: int, seed: int) -> None:
    for i in range(seed, seed + count):
        (out / f"slice{i:04d}.tir").write_text(random_slice_program(i), encoding="utf-8")
    print(f"✓ {count} random slice programs in {out}")


def main() -> int:
    parser = argparse.ArgumentParser(description="Generate synthetic TIR programs")
    parser.add_argument("kind", choices=["scale", "planted", "slices"])
    parser.add_argument("out", help="output directory")
    parser.add_argument("--count", type=int, default=None, help="number of programs (planted, slices)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--classes", type=int, default=50)
    parser.add_argument("--instructions", type=int, default=5000)
    args = parser.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.kind == "scale":
        write_scale(out, args.classes, args.instructions)
    elif args.kind == "planted":
        write_planted(out, args.count or 200, args.seed)
    else:
        write_slices(out, args.count or 100, args.seed)
    return 0


if __name__ == "__main__":
    sys.exit(main())
