#!/usr/bin/env python3
"""Generate the committed fixture CSVs under fixtures/.

Deterministic (fixed seed) and intentionally independent of the package:
plain csv + random only. Prints an independent tally of the distributions so
expected values frozen in the tests can be checked against this script's
output rather than against the engine under test.

Forced properties:
  characteristics: 200 rows; an counts 2016..2019 = 60/52/46/42 (decreasing);
    mois strictly modal 7; jour strict antimode 15; atm has exactly 7 NA (-1)
    rows and code 1 strictly modal.
  places: 200 rows; catr strictly modal 3; prof strictly modal 1 with 5 NA.
  users: 320 rows; sexe 1:210 2:110; catu 1:200 2:80 3:40.
  vehicles: 260 rows; catv strictly modal 7.
"""

from __future__ import annotations

import csv
import json
import random
from collections import Counter
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "fixtures"
SEED = 20190401


def spread(counts: dict[int, int], rng: random.Random) -> list[int]:
    """Expand {value: count} into a shuffled list."""
    values = [v for v, n in counts.items() for _ in range(n)]
    rng.shuffle(values)
    return values


def num_acc(year: int, seq: int) -> int:
    return year * 100000000 + seq


def gen_characteristics(rng: random.Random):
    an_counts = {2016: 60, 2017: 52, 2018: 46, 2019: 42}
    years = [y for y, n in sorted(an_counts.items()) for _ in range(n)]
    ids = [num_acc(y, i + 1) for i, y in enumerate(years)]

    mois_counts = {1: 12, 2: 10, 3: 14, 4: 16, 5: 15, 6: 18, 7: 38, 8: 22, 9: 16, 10: 14, 11: 13, 12: 12}
    assert sum(mois_counts.values()) == 200 and max(mois_counts, key=mois_counts.get) == 7
    mois = spread(mois_counts, rng)

    jour_counts = {d: 7 for d in range(1, 29)}
    jour_counts[15] = 1
    extra = 200 - sum(jour_counts.values())
    for d in range(1, 1 + extra):
        jour_counts[d] += 1
    assert sum(jour_counts.values()) == 200 and min(jour_counts, key=jour_counts.get) == 15
    jour = spread(jour_counts, rng)

    atm_counts = {-1: 7, 1: 95, 2: 40, 3: 25, 4: 18, 5: 15}
    assert sum(atm_counts.values()) == 200
    atm = spread(atm_counts, rng)

    lum = spread({1: 120, 2: 25, 3: 20, 4: 15, 5: 20}, rng)
    agg = spread({1: 85, 2: 115}, rng)
    inter = spread({1: 110, 2: 30, 3: 25, 4: 10, 6: 15, 9: 10}, rng)
    col = spread({1: 30, 2: 45, 3: 40, 4: 15, 5: 10, 6: 25, 7: 35}, rng)

    rows = []
    for i in range(200):
        hrmn = f"{rng.randrange(0, 24):02d}{rng.randrange(0, 60):02d}"
        rows.append(
            {
                "Num_Acc": ids[i],
                "an": years[i],
                "mois": mois[i],
                "jour": jour[i],
                "hrmn": hrmn,
                "lum": lum[i],
                "agg": agg[i],
                "int": inter[i],
                "atm": atm[i],
                "col": col[i],
                "com": rng.randrange(1, 600),
                "dep": rng.choice([10, 130, 330, 590, 690, 750]),
            }
        )
    return rows, ids


def gen_places(rng: random.Random, ids: list[int]):
    catr = spread({1: 25, 2: 30, 3: 85, 4: 40, 9: 20}, rng)
    prof = spread({-1: 5, 1: 120, 2: 40, 3: 20, 4: 15}, rng)
    surf = spread({-1: 8, 1: 130, 2: 45, 7: 10, 9: 7}, rng)
    plan = spread({-1: 6, 1: 140, 2: 25, 3: 21, 4: 8}, rng)
    circ = spread({-1: 10, 1: 40, 2: 120, 3: 25, 4: 5}, rng)
    vosp = spread({-1: 12, 0: 160, 1: 10, 2: 10, 3: 8}, rng)
    situ = spread({-1: 9, 0: 10, 1: 150, 3: 12, 4: 19}, rng)

    rows = []
    for i, acc in enumerate(ids):
        rows.append(
            {
                "Num_Acc": acc,
                "voie": rng.randrange(1, 900),
                "V1": rng.choice([-1, -1, 0, 1, 2]),
                "V2": rng.choice(["", "", "A", "B", "C"]),
                "catr": catr[i],
                "circ": circ[i],
                "surf": surf[i],
                "plan": plan[i],
                "vosp": vosp[i],
                "prof": prof[i],
                "env1": rng.choice([30, 50, 50, 80, 90, 110, 130]),
                "nbv": rng.choice([1, 2, 2, 2, 3, 4]),
                "pr": rng.choice([-1, -1, 1, 5, 12, 30]),
                "pr1": rng.choice([-1, -1, 0, 100, 500]),
                "lartpc": rng.choice([0, 0, 0, 1, 2, 5]),
                "situ": situ[i],
            }
        )
    return rows


def gen_users(rng: random.Random, ids: list[int]):
    # 200 accidents: first 20 get 3 users, next 80 get 2, rest 1 -> 320 rows
    per_acc = [3] * 20 + [2] * 80 + [1] * 100
    assert sum(per_acc) == 320
    slots = []
    for acc, n in zip(ids, per_acc):
        for k in range(n):
            slots.append((acc, k))

    catu = [1] * 200 + [2] * 80 + [3] * 40
    # first user of an accident is its driver
    catu_pool = Counter({1: 200 - 200, 2: 80, 3: 40})  # drivers preassigned
    rest = spread({2: 80, 3: 40}, rng)
    sexe = spread({1: 210, 2: 110}, rng)
    grav = spread({1: 130, 2: 20, 3: 60, 4: 110}, rng)
    secu = spread({-1: 15, 0: 30, 1: 200, 2: 40, 8: 20, 9: 15}, rng)
    trajet = spread({-1: 20, 0: 20, 1: 90, 2: 30, 3: 40, 4: 30, 5: 70, 9: 20}, rng)

    rows = []
    rest_i = 0
    for i, (acc, k) in enumerate(slots):
        if k == 0:
            cat = 1
        else:
            cat = rest[rest_i]
            rest_i += 1
        ped = cat == 3
        rows.append(
            {
                "Num_Acc": acc,
                "an_nais": rng.randrange(1950, 2005),
                "num_veh": "B02" if k == 2 else "A01",
                "place": 10 if ped else (1 if cat == 1 else rng.choice([2, 3])),
                "catu": cat,
                "grav": grav[i],
                "sexe": sexe[i],
                "trajet": trajet[i],
                "secu": secu[i],
                "locp": rng.choice([1, 2, 3, 4, 5]) if ped else 0,
                "actp": rng.choice([1, 2, 3, 9]) if ped else 0,
                "etatp": rng.choice([1, 1, 2, 3]) if ped else -1,
            }
        )
    return rows


def gen_vehicles(rng: random.Random, ids: list[int]):
    per_acc = [2] * 60 + [1] * 140
    assert sum(per_acc) == 260
    catv = spread({1: 25, 2: 20, 7: 140, 10: 15, 33: 40, 38: 10, 99: 10}, rng)
    rows = []
    i = 0
    for acc, n in zip(ids, per_acc):
        for k in range(n):
            cat = catv[i]
            rows.append(
                {
                    "Num_Acc": acc,
                    "senc": rng.choice([-1, 0, 1, 1, 2, 3]),
                    "occutc": rng.randrange(10, 50) if cat == 38 else 0,
                    "num_veh": "B02" if k == 1 else "A01",
                    "catv": cat,
                    "obs": rng.choice([0, 0, 0, 1, 2, 6, 13]),
                    "obsm": rng.choice([0, 1, 2, 2, 5, 9]),
                    "choc": rng.choice([0, 1, 1, 2, 3, 4, 7, 8]),
                }
            )
            i += 1
    return rows


def write_csv(path: Path, rows: list[dict]) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)


def tally(rows: list[dict], column: str) -> dict:
    return dict(sorted(Counter(r[column] for r in rows).items(), key=lambda kv: str(kv[0])))


def main() -> None:
    rng = random.Random(SEED)
    OUT.mkdir(exist_ok=True)
    chars, ids = gen_characteristics(rng)
    places = gen_places(rng, ids)
    users = gen_users(rng, ids)
    vehicles = gen_vehicles(rng, ids)

    write_csv(OUT / "characteristics.csv", chars)
    write_csv(OUT / "places.csv", places)
    write_csv(OUT / "users.csv", users)
    write_csv(OUT / "vehicles.csv", vehicles)

    an_nais = sorted(r["an_nais"] for r in users)
    n = len(an_nais)
    mean = sum(an_nais) / n
    var = sum((v - mean) ** 2 for v in an_nais) / n
    summary = {
        "characteristics": {"rows": len(chars), "an": tally(chars, "an"), "mois": tally(chars, "mois"), "jour": tally(chars, "jour"), "atm": tally(chars, "atm")},
        "places": {"rows": len(places), "catr": tally(places, "catr"), "prof": tally(places, "prof")},
        "users": {"rows": len(users), "sexe": tally(users, "sexe"), "catu": tally(users, "catu"), "grav": tally(users, "grav"), "secu": tally(users, "secu"),
                   "an_nais": {"min": an_nais[0], "max": an_nais[-1], "mean": mean, "median": an_nais[(n - 1) // 2], "pop_std": var ** 0.5}},
        "vehicles": {"rows": len(vehicles), "catv": tally(vehicles, "catv")},
    }
    print(json.dumps(summary, indent=2))


if __name__ == "__main__":
    main()
