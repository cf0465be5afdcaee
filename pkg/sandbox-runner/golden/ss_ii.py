# Simply supported beam, condition II: 1 m distributed load.
# Span 10 m, pinned at 0 m, roller at 10 m, 10 kN/m downward over [2, 3] m.
import json

span = 10.0
w, a, b = 10.0, 2.0, 3.0

total = w * (b - a)          # resultant force
centroid = (a + b) / 2.0     # acts at the segment midpoint

r_roller = total * centroid / span
r_pinned = total - r_roller

model = {
    "id": "SS-II-x2",
    "span_m": span,
    "supports": [
        {"kind": "pinned", "position_m": 0.0},
        {"kind": "roller", "position_m": 10.0},
    ],
    "loads": [
        {"type": "udl", "intensity_kN_per_m": w, "start_m": a, "end_m": b, "direction": "down"}
    ],
}
result = {
    "schema": "beam-result/v1",
    "reactions": [
        {"position": 0.0, "V": r_pinned, "H": 0.0},
        {"position": 10.0, "V": r_roller},
    ],
    "model": model,
}
print(f"pinned: {r_pinned} kN up, roller: {r_roller} kN up")
print("===RESULT===")
print(json.dumps(result))
