#!/usr/bin/env python3
"""
Sample Data Generator for the Forest Planning Workbench
Writes the shipped scenario and policy files under scenarios/ and policies/
"""

import json
import numpy as np
from pathlib import Path

# Pine forest scale: harvest age ~60 years, oldest class ~120 years, horizon ~200 years
PINE_HARVEST_AGE = 60
PINE_MAX_AGE = 120
PINE_HORIZON = 200

def pine_scenario(scale=10, area_limit=1000.0):
    """
    Pine-forest scenario with ages and horizon divided by `scale`

    Args:
        scale: divisor applied to the pine ages and horizon
        area_limit: total forest territory S in hectares

    Returns:
        dict: scenario document
    """
    L = PINE_MAX_AGE // scale
    l = PINE_HARVEST_AGE // scale
    T = PINE_HORIZON // scale
    ages = np.arange(1, L + 1)

    # Carbon uptake grows with age and saturates in mature stands
    gamma = np.round(np.minimum(2.6, 0.5 + 0.3 * (ages - 1)), 2)
    mu = np.where(ages >= l, 150.0 + 15.0 * (ages - l), 0.0)
    eta = 40.0 + 15.0 * (ages - 1)

    return {
        'T': T,
        'L': L,
        'l': l,
        'l0': 1,
        'S': area_limit,
        'v0': [round(0.96 * area_limit / L, 6)] * L,
        'survival': [0.99] * L,
        'gamma': gamma.tolist(),
        'Gamma': [1200.0] * T,
        'mu': mu.tolist(),
        'eta': eta.tolist(),
        # Keep young stands on the ground at the end of the horizon
        'terminal_lo': [20.0 if age < l else 0.0 for age in ages],
    }

def steady_rotation_scenario(area_per_class=100.0, horizon=10):
    """Three age classes, cut at age 3 and replant each stage"""
    a = area_per_class
    return {
        'T': horizon,
        'L': 3,
        'l': 3,
        'l0': 1,
        'S': 3 * a,
        'v0': [a, a, a],
        'survival': [1.0, 1.0, 1.0],
        'gamma': [1.0, 1.0, 1.0],
        'Gamma': [0.0] * horizon,
        'mu': [0.0, 0.0, 10.0],
        'eta': [4.0, 0.0, 0.0],
        'terminal_lo': [a, a, a],
        'terminal_hi': [a, a, a],
    }

def stationary_policy(area_per_class=100.0, horizon=10):
    """Harvest the oldest class and replant the same area every stage"""
    a = area_per_class
    return {
        'harvest': [[0.0, 0.0, a]] * horizon,
        'plant': [[a, 0.0, 0.0]] * horizon,
    }

def zero_policy(scenario):
    """No harvesting or planting: pure natural dynamics"""
    zeros = [[0.0] * scenario['L'] for _ in range(scenario['T'])]
    return {'harvest': zeros, 'plant': zeros}

def write_json(payload, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', encoding='utf-8') as handle:
        json.dump(payload, handle, indent=2)
        handle.write('\n')
    print(f"✅ Generated {path}")

def main():
    """Generate and save sample scenario and policy files"""
    print("🌲 Generating Forest Planning Sample Data")
    print("=" * 50)

    pine = pine_scenario()
    write_json(pine, 'scenarios/pine_scaled.json')
    write_json(steady_rotation_scenario(), 'scenarios/steady_rotation.json')
    write_json(stationary_policy(), 'policies/steady_rotation_stationary.json')
    write_json(zero_policy(pine), 'policies/pine_zero.json')

    print("\n🎉 Sample data generation complete!")

if __name__ == "__main__":
    main()
