# Overhang beam, condition I: point load in the cantilevered region.
# Span 10 m, pinned at 0 m, roller at 5 m (mid-span), 10 kN downward at 9 m.
import json

p, x = 10.0, 9.0
roller_at = 5.0

# Moments about the pinned support: R_roller * 5 = p * 9
r_roller = p * x / roller_at
# Vertical equilibrium; the pinned reaction comes out negative (downward)
r_pinned = p - r_roller

model = {
    "id": "OH-I-x9",
    "span_m": 10.0,
    "supports": [
        {"kind": "pinned", "position_m": 0.0},
        {"kind": "roller", "position_m": 5.0},
    ],
    "loads": [
        {"type": "point", "magnitude_kN": p, "position_m": x, "direction": "down"}
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
print(f"pinned: {r_pinned} kN (negative = down), roller: {r_roller} kN up")
print("===RESULT===")
print(json.dumps(result))
