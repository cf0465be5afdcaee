# Overhang beam, condition II: 1 m distributed load beyond the roller.
# Span 10 m, pinned at 0 m, roller at 5 m, 10 kN/m downward over [8, 9] m.
import json

w, a, b = 10.0, 8.0, 9.0
roller_at = 5.0

total = w * (b - a)
centroid = (a + b) / 2.0

r_roller = total * centroid / roller_at
r_pinned = total - r_roller

model = {
    "id": "OH-II-x8",
    "span_m": 10.0,
    "supports": [
        {"kind": "pinned", "position_m": 0.0},
        {"kind": "roller", "position_m": 5.0},
    ],
    "loads": [
        {"type": "udl", "intensity_kN_per_m": w, "start_m": a, "end_m": b, "direction": "down"}
    ],
}
result = {
    "schema": "beam-result/v1",
    "reactions": [
        {"position": 0.0, "V": r_pinned, "H": 0.0},
        {"position": 5.0, "V": r_roller},
    ],
    "model": model,
}
print(f"pinned: {r_pinned} kN, roller: {r_roller} kN up")
print("===RESULT===")
print(json.dumps(result))
