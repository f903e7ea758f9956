import json
import math
import os

# Примеры состояний для командной строки: python generate_example_states.py
# Пишет states/*.json в формате, который читает gauss_eof.schemas.load_state

OUT_DIR = 'states'

r = 0.5
states = {
    # чистое двухмодовое сжатое состояние, EoF = H(0.5)
    'tmsv.json': {'standard_form': {
        'a': math.cosh(2 * r), 'b': math.cosh(2 * r),
        'c1': math.sinh(2 * r), 'c2': -math.sinh(2 * r),
    }},
    # произведение тепловых состояний, сепарабельно
    'sep.json': {'matrix': [
        [3.0, 0.0, 0.0, 0.0],
        [0.0, 3.0, 0.0, 0.0],
        [0.0, 0.0, 2.0, 0.0],
        [0.0, 0.0, 0.0, 2.0],
    ]},
    # β = -1: наименее запутанное при данных чистотах
    'glems.json': {'purity_params': {'mu_a': 0.5, 'mu_b': 0.7, 'mu': 0.5, 'beta': -1.0}},
    # несимметричное смешанное, границы не совпадают
    'mixed.json': {'standard_form': {'a': 2.0, 'b': 1.5, 'c1': 1.2, 'c2': -1.0}},
}

os.makedirs(OUT_DIR, exist_ok=True)
for name, state in states.items():
    with open(os.path.join(OUT_DIR, name), 'w', encoding='utf-8') as f:
        json.dump(state, f, indent=2)
        f.write('\n')
    print(f'{OUT_DIR}/{name}')
