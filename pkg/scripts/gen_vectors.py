#!/usr/bin/env python3
"""Generate cross-implementation reference vectors for the browser renderer.

One spec per shape x size combination is spawned and stepped 60 times; the
particle positions at steps 10/30/60 become the reference the TypeScript
engine must reproduce within 1e-3 scene units. Gravity is turned up so every
case launches, blooms and fires its satellite bursts inside the 60 steps.
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from pyrofit import pyro
from pyrofit.choreography import Color, FireworkSpec, Shape, Size
from pyrofit.wire import spec_to_wire

CHECKPOINTS = (10, 30, 60)
OUT = Path(__file__).resolve().parents[1] / "frontend" / "tests" / "vectors" / "pyro_vectors.json"

SCENE = dict(
    dt_s=1.0 / 60.0,
    gravity_y=-50.0,
    drag=0.98,
    bounds=[100.0, 100.0],
)

COLORS = [Color.MULTI, Color.GREEN, Color.ORANGE, Color.BLUE,
          Color.YELLOW, Color.PURPLE, Color.WHITE]


def main() -> None:
    cfg = pyro.SceneConfig(
        dt_s=SCENE["dt_s"], gravity_y=SCENE["gravity_y"], drag=SCENE["drag"],
        bounds=tuple(SCENE["bounds"]),
    )
    cases = []
    idx = 0
    for shape in (Shape.STAR, Shape.BALL, Shape.CLUSTER):
        for size in (Size.LARGE, Size.MEDIUM, Size.SMALL, Size.TINY):
            spec = FireworkSpec(
                origin=(20.0 + 6.0 * idx, 5.0),
                launch_angle_deg=90.0 - 4.0 * (idx - 5.5),
                shape=shape,
                color=COLORS[idx % len(COLORS)],
                size=size,
                seed=0xC0FFEE + 7919 * idx,
                spawn_t_ms=0,
            )
            fw = pyro.spawn(spec, cfg)
            checkpoints = {}
            for step_i in range(1, max(CHECKPOINTS) + 1):
                pyro.step([fw], cfg)
                if step_i == 30:
                    assert fw.phase is pyro.Phase.BLOOMING, (
                        f"{shape.value}/{size.value}: not bloomed by step 30"
                    )
                if step_i in CHECKPOINTS:
                    points = []
                    if fw.rocket is not None:
                        points.append([fw.rocket.x, fw.rocket.y])
                    points.extend([p.x, p.y] for p in fw.particles)
                    checkpoints[str(step_i)] = points
            assert not fw.pending, f"{shape.value}/{size.value}: sub-bursts unfired at step 60"
            cases.append({"spec": spec_to_wire(spec), "checkpoints": checkpoints})
            idx += 1

    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps({"scene": SCENE, "cases": cases}, indent=1) + "\n")
    total = sum(len(c["checkpoints"]["60"]) for c in cases)
    print(f"wrote {OUT} ({len(cases)} cases, {total} particles at step 60)")


if __name__ == "__main__":
    main()
