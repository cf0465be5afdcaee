# Simply supported beam, condition III: point load plus full-span udl.
# Span 10 m, pinned at 0 m, roller at 10 m,
# 10 kN downward at 4 m and 10 kN/m downward over the whole span.
import json

span = 10.0
p, x = 10.0, 4.0
w = 10.0

udl_total = w * span
udl_centroid = span / 2.0

# Moments about the pinned support
r_roller = (p * x + udl_total * udl_centroid) / span
r_pinned = p + udl_total - r_roller

model = {
    "id": "SS-III-x4",
    "span_m": span,
    "supports": [
        {"kind": "pinned", "position_m": 0.0},
        {"kind": "roller", "position_m": 10.0},
    ],
    "loads": [
        {"type": "point", "magnitude_kN": p, "position_m": x, "direction": "down"},
        {"type": "udl", "intensity_kN_per_m": w, "start_m": 0.0, "end_m": span, "direction": "down"},
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
