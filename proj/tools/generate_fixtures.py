#!/usr/bin/env python3
"""Regenerates the bundled maps and scenarios under data/.

The fixtures are committed; rerun this script only when changing them:

    python3 tools/generate_fixtures.py
"""

import json
import math
import os

DATA = os.path.join(os.path.dirname(__file__), "..", "data")


def write(relpath, obj):
    path = os.path.join(DATA, relpath)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w") as f:
        json.dump(obj, f, indent=1)
        f.write("\n")
    print("wrote", path)


def chain(prefix, y, x0, x1, seg_len, sample_step, adjacent_prefix=None):
    """Straight same-direction lane chain along +x split into segments."""
    lanes = []
    n = round((x1 - x0) / seg_len)
    for i in range(n):
        a = x0 + i * seg_len
        b = a + seg_len
        pts = []
        x = a
        while x < b - 1e-9:
            pts.append([x, y])
            x += sample_step
        pts.append([b, y])
        lane = {
            "id": f"{prefix}{i + 1}",
            "centerline": pts,
            "successors": [f"{prefix}{i + 2}"] if i + 1 < n else [],
            "adjacent": [f"{adjacent_prefix}{i + 1}"] if adjacent_prefix else [],
        }
        lanes.append(lane)
    return lanes


def straight_route_map():
    lanes = chain("a", 0.0, -60.0, 240.0, 60.0, 20.0, adjacent_prefix="b")
    lanes += chain("b", 3.5, -60.0, 240.0, 60.0, 20.0, adjacent_prefix="a")
    zones = [
        {"tag": "highway", "polygon": [[-70, -10], [39, -10], [39, 10], [-70, 10]]},
        {"tag": "urban", "polygon": [[39, -10], [250, -10], [250, 10], [39, 10]]},
    ]
    return {"lanes": lanes, "zones": zones}


def fig6_scenario():
    frames = []
    for i in range(30):
        ego_x = 2.0 * i  # 20 m/s at 0.1 s cycles
        objects = []
        if 10 <= i <= 19:  # steady lead -> follow drive window
            objects.append(
                {"id": "lead", "x": ego_x + 25.0, "y": 0.0, "vx": 20.0, "vy": 0.0,
                 "category": "vehicle"}
            )
        frames.append(
            {
                "t": round(0.1 * i, 6),
                "ego": {"x": ego_x, "y": 0.0, "heading": 0.0, "speed": 20.0, "yaw_rate": 0.0},
                "objects": objects,
                "annotations": [],
            }
        )
    return {"cycle_period": 0.1, "frames": frames}


def urban_block_map():
    lanes = chain("c", 0.0, -60.0, 180.0, 60.0, 20.0, adjacent_prefix="d")
    lanes += chain("d", 3.5, -60.0, 180.0, 60.0, 20.0, adjacent_prefix="c")
    # crossing lane through the intersection at x = 90
    lanes.append(
        {
            "id": "x1",
            "centerline": [[90.0, -40.0], [90.0, -20.0], [90.0, 0.0], [90.0, 20.0], [90.0, 40.0]],
            "successors": [],
            "adjacent": [],
        }
    )
    zones = [
        {"tag": "urban", "polygon": [[-70, -50], [190, -50], [190, 50], [-70, 50]]},
    ]
    return {"lanes": lanes, "zones": zones}


def fig7_scenario():
    frames = []
    for i in range(30):
        ego_x = 1.0 * i  # 10 m/s
        objects = [
            # slower lead in the own lane: speed gap 2.5 m/s blocks follow drive
            {"id": "lead", "x": 12.0 + 0.75 * i, "y": 0.0, "vx": 7.5, "vy": 0.0,
             "category": "vehicle"},
            # pedestrian walking along the other lane
            {"id": "ped1", "x": 16.0 + 0.14 * i, "y": 3.5, "vx": 1.4, "vy": 0.0,
             "category": "vru"},
        ]
        frames.append(
            {
                "t": round(0.1 * i, 6),
                "ego": {"x": ego_x, "y": 0.0, "heading": 0.0, "speed": 10.0, "yaw_rate": 0.0},
                "objects": objects,
                "annotations": ["complex_intersection"] if 12 <= i <= 19 else [],
            }
        )
    return {"cycle_period": 0.1, "frames": frames}


RING_RADIUS = 120.0


def ring_point(theta_deg, radius=RING_RADIUS):
    t = math.radians(theta_deg)
    return [round(radius * math.cos(t), 3), round(radius * math.sin(t), 3)]


def ring_route_map():
    lanes = []
    n_segments = 24  # 15 degrees each
    for i in range(n_segments):
        start = i * 15.0
        pts = [ring_point(start + k * 5.0) for k in range(4)]  # 5 degree sampling
        lanes.append(
            {
                "id": f"r{i:02d}",
                "centerline": pts,
                "successors": [f"r{(i + 1) % n_segments:02d}"],
                "adjacent": [],
            }
        )

    def sector(tag, a0, a1):
        outer = [ring_point(a, RING_RADIUS + 40.0) for a in frange(a0, a1, 10.0)]
        inner = [ring_point(a, RING_RADIUS - 40.0) for a in frange(a1, a0, -10.0)]
        return {"tag": tag, "polygon": outer + inner}

    def frange(a, b, step):
        vals = []
        v = a
        while (step > 0 and v <= b + 1e-9) or (step < 0 and v >= b - 1e-9):
            vals.append(v)
            v += step
        return vals

    zones = [
        sector("highway", -1.0, 121.0),
        sector("rural", 119.0, 241.0),
        sector("urban", 239.0, 361.0),
    ]
    return {"lanes": lanes, "zones": zones}


def ring_state(arc_m, speed):
    """Pose on the ring at the given arc length from angle 100 deg."""
    theta = math.radians(100.0) + arc_m / RING_RADIUS
    x = RING_RADIUS * math.cos(theta)
    y = RING_RADIUS * math.sin(theta)
    heading = theta + math.pi / 2.0  # counterclockwise travel
    return x, y, heading, speed / RING_RADIUS


def mixed_ring_scenario():
    frames = []
    speed = 18.0
    n = 210
    for i in range(n):
        ego_arc = speed * 0.1 * i
        x, y, heading, yaw_rate = ring_state(ego_arc, speed)
        objects = []
        if 5 <= i <= 20:  # highway follow drive
            ax, ay, ah, _ = ring_state(ego_arc + 25.0, speed)
            objects.append(
                {"id": "lead_hw", "x": round(ax, 3), "y": round(ay, 3),
                 "vx": round(speed * math.cos(ah), 3), "vy": round(speed * math.sin(ah), 3),
                 "category": "vehicle"}
            )
        if 60 <= i <= 100:  # parked off-road object, never on a relevant cell
            # fixed spot 12 m outside the lane ring, passed around frame 80
            theta = math.radians(100.0) + (speed * 0.1 * 80) / RING_RADIUS
            px = (RING_RADIUS + 12.0) * math.cos(theta)
            py = (RING_RADIUS + 12.0) * math.sin(theta)
            objects.append(
                {"id": "parked1", "x": round(px, 3), "y": round(py, 3), "vx": 0.0, "vy": 0.0,
                 "category": "static"}
            )
        if i >= 164:  # urban: slower lead, speed gap 2.5 m/s
            lead_arc = (speed * 0.1 * 164 + 14.0) + 15.5 * 0.1 * (i - 164)
            ax, ay, ah, _ = ring_state(lead_arc, 15.5)
            objects.append(
                {"id": "lead_urb", "x": round(ax, 3), "y": round(ay, 3),
                 "vx": round(15.5 * math.cos(ah), 3), "vy": round(15.5 * math.sin(ah), 3),
                 "category": "vehicle"}
            )
        if 175 <= i <= 205:  # pedestrian on the lane behind the ego
            ped_arc = ego_arc - 10.0 - 0.5 * 0.1 * (i - 175)
            px, py, ph, _ = ring_state(ped_arc, 1.0)
            objects.append(
                {"id": "ped_urb", "x": round(px, 3), "y": round(py, 3),
                 "vx": round(1.0 * math.cos(ph), 3), "vy": round(1.0 * math.sin(ph), 3),
                 "category": "vru"}
            )
        frames.append(
            {
                "t": round(0.1 * i, 6),
                "ego": {"x": round(x, 3), "y": round(y, 3), "heading": round(heading, 6),
                        "speed": speed, "yaw_rate": round(yaw_rate, 6)},
                "objects": objects,
                "annotations": ["complex_intersection"] if 180 <= i <= 199 else [],
            }
        )
    return {"cycle_period": 0.1, "frames": frames}


def main():
    write("maps/straight_route.json", straight_route_map())
    write("maps/urban_block.json", urban_block_map())
    write("maps/ring_route.json", ring_route_map())
    write("scenarios/fig6_highway_urban.json", fig6_scenario())
    write("scenarios/fig7_urban_intersection.json", fig7_scenario())
    write("scenarios/mixed_ring.json", mixed_ring_scenario())


if __name__ == "__main__":
    main()
