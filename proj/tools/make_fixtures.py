#!/usr/bin/env python3
"""Regenerate the example datasets under data/fixtures/ (deterministic)."""
import itertools
import json
import math
import pathlib
import random

OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "fixtures"


def manifest(name, params, objectives, rows, **extra):
    doc = {"name": name}
    doc.update(extra)
    doc["parameters"] = [{"name": n, "options": o} for n, o in params]
    doc["objectives"] = objectives
    doc["rows"] = rows
    return doc


def write(name, doc):
    (OUT / name).write_text(json.dumps(doc, indent=1) + "\n")


def small():
    params = [("catalyst", ["Pd", "Ni"]), ("solvent", ["DMF", "THF", "MeCN"])]
    base = {"Pd": 40.0, "Ni": 20.0}
    bonus = {"DMF": 10.0, "THF": 30.0, "MeCN": 0.0}
    rows = []
    for c, s in itertools.product(*(o for _, o in params)):
        y = base[c] + bonus[s]
        rows.append({"assignment": {"catalyst": c, "solvent": s}, "values": {"yield": y}})
    rows.append({"assignment": {"catalyst": "Pd", "solvent": "THF"}, "values": {"yield": 66.0}})
    return manifest("small_2x3", params, [{"name": "yield", "goal": "maximize"}], rows,
                    provenance="synthetic example")


def grid():
    params = [("ligand", [f"L{i}" for i in range(1, 9)]),
              ("base", [f"B{i}" for i in range(1, 11)]),
              ("temperature", [f"T{i}" for i in range(1, 13)])]
    rows = []
    for i, j, k in itertools.product(range(8), range(10), range(12)):
        y = 50 + 30 * math.sin(i * 0.7) * math.cos(j * 0.4) + 2.0 * (k - 6) - 0.2 * (k - 6) ** 2
        rows.append({"assignment": {"ligand": f"L{i+1}", "base": f"B{j+1}", "temperature": f"T{k+1}"},
                     "values": {"yield": round(max(0.0, y), 3)}})
    return manifest("grid_8x10x12", params, [{"name": "yield", "goal": "maximize"}], rows,
                    provenance="synthetic example")


def chan_lam():
    rng = random.Random(7)
    params = [("catalyst", ["Cu(OAc)2", "CuI", "Cu(OTf)2"]),
              ("base", ["pyridine", "Et3N", "DBU", "none"]),
              ("solvent", ["DCM", "MeOH", "DMSO"])]
    rows = []
    for c, b, s in itertools.product(*(o for _, o in params)):
        if (c, b, s) in {("CuI", "none", "DMSO"), ("Cu(OTf)2", "DBU", "MeOH")}:
            continue
        desired = 10 + 40 * (c == "Cu(OAc)2") + 20 * (b == "pyridine") + 10 * (s == "DCM")
        undesired = 5 + 25 * (b == "DBU") + 10 * (s == "DMSO")
        for _ in range(2):
            rows.append({"assignment": {"catalyst": c, "base": b, "solvent": s},
                         "values": {"desired": round(max(0.0, desired + rng.gauss(0, 4)), 2),
                                    "undesired": round(max(0.0, undesired + rng.gauss(0, 3)), 2)}})
    return manifest("chan_lam_like", params,
                    [{"name": "desired", "goal": "maximize", "tolerance": 0.3},
                     {"name": "undesired", "goal": "minimize", "tolerance": 0.3}],
                    rows, provenance="synthetic example", selectivity=True)


def heavy_zero():
    rng = random.Random(11)
    params = [("metal", ["Pd", "Ni", "Cu", "Fe"]),
              ("ligand", ["PPh3", "XPhos", "dppf", "BINAP", "none"]),
              ("solvent", ["toluene", "dioxane", "DMF", "water"])]
    rows = []
    for m, l, s in itertools.product(*(o for _, o in params)):
        y = 0.0
        if m == "Pd" and l != "none":
            y = rng.uniform(20, 95) if rng.random() < 0.6 else 0.0
        elif rng.random() < 0.1:
            y = rng.uniform(1, 15)
        rows.append({"assignment": {"metal": m, "ligand": l, "solvent": s}, "values": {"yield": round(y, 2)}})
    return manifest("heavy_zero", params, [{"name": "yield", "goal": "maximize"}], rows,
                    provenance="synthetic example")


def planted():
    params = [("p1", [f"a{j}" for j in range(1, 7)]),
              ("p2", [f"b{j}" for j in range(1, 7)]),
              ("p3", [f"c{j}" for j in range(1, 7)])]
    rows = []
    for i, j, k in itertools.product(range(6), range(6), range(6)):
        s = -1.0 + 2.0 * max(0, k - 2) / 3.0 if j == 0 else -1.0
        y = 80.0 * (i == 2) + 5.0 * s
        rows.append({"assignment": {"p1": f"a{i+1}", "p2": f"b{j+1}", "p3": f"c{k+1}"},
                     "values": {"yield": y}})
    return manifest("planted_3x6", params, [{"name": "yield", "goal": "maximize"}], rows,
                    provenance="synthetic example")


def descriptors():
    return {
        "catalyst": "label,charge,mass,electronegativity\nCu(OAc)2,2,181.6,1.90\nCuI,1,190.5,1.60\nCu(OTf)2,2,361.7,2.10\n",
        "base": "label,pKa,steric\npyridine,5.2,1.0\nEt3N,10.7,2.4\nDBU,12.0,3.1\nnone,0.0,0.0\n",
        "solvent": "label,dielectric,polarity\nDCM,8.9,3.1\nMeOH,32.7,5.1\nDMSO,46.7,7.2\n",
    }


def mock_script():
    picks = [("Pd", "DMF"), ("Ni", "THF"), ("Pd", "THF"), ("Pd", "Toluene"), ("Ni", "DMF"), ("Ni", "MeCN")]
    responses = []
    for n, (c, s) in enumerate(picks, 1):
        responses.append({
            "analysis": f"iteration {n}: reviewing the table so far",
            "hypothesis": "palladium with an ethereal solvent should do best",
            "reasoning": "cover each catalyst before refining the solvent",
            "suggestions": [{"catalyst": c, "solvent": s}],
        })
    return {"responses": responses}


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    write("small_2x3.json", small())
    write("grid_8x10x12.json", grid())
    write("chan_lam_like.json", chan_lam())
    write("heavy_zero.json", heavy_zero())
    write("planted_3x6.json", planted())
    for name, text in descriptors().items():
        (OUT / f"chan_lam_{name}_descriptors.csv").write_text(text)
    (OUT / "small_mock_script.json").write_text(json.dumps(mock_script(), indent=1) + "\n")


if __name__ == "__main__":
    main()
