# Overhang beam, condition IV: point load riding a 1 m udl past the roller.
# Span 10 m, pinned at 0 m, roller at 5 m,
# 10 kN/m downward over [6, 7] m with 10 kN downward at 6.5 m.
import json

w, a, b = 10.0, 6.0, 7.0
p, x = 10.0, 6.5
roller_at = 5.0

udl_total = w * (b - a)
udl_centroid = (a + b) / 2.0

r_roller = (p * x + udl_total * udl_centroid) / roller_at
r_pinned = p + udl_total - r_roller

model = {
    "id": "OH-IV-x6",
    "span_m": 10.0,
    "supports": [
        {"kind": "pinned", "position_m": 0.0},
        {"kind": "roller", "position_m": 5.0},
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
        {"position": 5.0, "V": r_roller},
    ],
    "model": model,
}
print(f"pinned: {r_pinned} kN, roller: {r_roller} kN up")
print("===RESULT===")
print(json.dumps(result))
