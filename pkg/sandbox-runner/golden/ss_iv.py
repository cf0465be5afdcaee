# Simply supported beam, condition IV: point load riding a 1 m udl.
# Span 10 m, pinned at 0 m, roller at 10 m,
# 10 kN/m downward over [4, 5] m with 10 kN downward at 4.5 m.
import json

span = 10.0
w, a, b = 10.0, 4.0, 5.0
p, x = 10.0, 4.5

udl_total = w * (b - a)
udl_centroid = (a + b) / 2.0

r_roller = (p * x + udl_total * udl_centroid) / span
r_pinned = p + udl_total - r_roller

model = {
    "id": "SS-IV-x4",
    "span_m": span,
    "supports": [
        {"kind": "pinned", "position_m": 0.0},
        {"kind": "roller", "position_m": 10.0},
    ],
    "loads": [
        {"type": "point", "magnitude_kN": p, "position_m": x, "direction": "down"},
        {"type": "udl", "intensity_kN_per_m": w, "start_m": a, "end_m": b, "direction": "down"},
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
