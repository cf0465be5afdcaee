# Simply supported beam, condition I: single point load.
# Span 10 m, pinned at 0 m, roller at 10 m, 10 kN downward at 4 m.
import json

span = 10.0
p, x = 10.0, 4.0

# Moment equilibrium about the pinned support: R_roller * span = p * x
r_roller = p * x / span
# Vertical equilibrium: R_pinned + R_roller = p
r_pinned = p - r_roller

model = {
    "id": "SS-I-x4",
    "span_m": span,
    "supports": [
        {"kind": "pinned", "position_m": 0.0},
        {"kind": "roller", "position_m": 10.0},
    ],
    "loads": [
        {"type": "point", "magnitude_kN": p, "position_m": x, "direction": "down"}
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
