#!/usr/bin/env python3
"""Generate the bundled fixture KB and its side files under data/fixture/.

The output is committed; rerunning with the same seed reproduces it exactly.

    python3 tools/gen_fixture.py [--out data/fixture] [--seed 7]
"""

import argparse
import json
import random
from pathlib import Path

ONT = "http://kb.example.org/ontology/"
RES = "http://kb.example.org/resource/"
XSD = "http://www.w3.org/2001/XMLSchema#"

FIRST = ["Ada", "Bela", "Carla", "Dmitri", "Elif", "Farid", "Greta", "Hugo", "Ines", "Jonas",
         "Kaori", "Luca", "Mira", "Nils", "Olga", "Pavel", "Quinn", "Rosa", "Sami", "Tove"]
LAST = ["Adler", "Berg", "Costa", "Dahl", "Engel", "Fischer", "Gomez", "Haas", "Ivanov", "Jensen",
        "Keller", "Lind", "Moreau", "Novak", "Ortiz", "Petrov", "Quist", "Rossi", "Sato", "Tanaka"]
LANGS = ["English", "French", "German", "Spanish", "Italian", "Dutch", "Polish", "Greek"]


def iri(local):
    return f"<{RES}{local}>"


def prop(name):
    return f"<{ONT}{name}>"


class Kb:
    def __init__(self):
        self.lines = []
        self.classes = {}

    def ent(self, s, p, o):
        self.lines.append(f"{iri(s)} {prop(p)} {iri(o)} .")

    def lit(self, s, p, value, dtype=None, lang=None):
        text = f'"{value}"'
        if dtype:
            text += f"^^<{XSD}{dtype}>"
        elif lang:
            text += f"@{lang}"
        self.lines.append(f"{iri(s)} {prop(p)} {text} .")


def generate(rng):
    kb = Kb()
    persons = [f"Person_{i}" for i in range(500)]
    orgs = [f"Org_{i}" for i in range(120)]
    universities = orgs[:60]
    places = [f"Place_{i}" for i in range(80)]
    countries = places[:10]
    series = [f"Series_{i}" for i in range(80)]
    films = [f"Film_{i}" for i in range(150)]
    awards = [f"Award_{i}" for i in range(40)]
    events = [f"Event_{i}" for i in range(30)]

    for p in persons:
        kb.classes[p] = "Person"
    for o in orgs:
        kb.classes[o] = "Organization"
    for p in places:
        kb.classes[p] = "Place"
    for w in series + films:
        kb.classes[w] = "Work"
    for e in events:
        kb.classes[e] = "Event"
    # awards stay unmapped

    # persons
    for i, p in enumerate(persons):
        name = f"{rng.choice(FIRST)} {rng.choice(LAST)}"
        if i % 7 == 0:
            kb.lit(p, "name", name, lang="en")
        else:
            kb.lit(p, "name", name)
        if i < 450:
            kb.lit(p, "birthYear", rng.randint(1900, 2000))
        if i < 300:
            kb.lit(p, "height", f"{rng.uniform(1.5, 2.05):.2f}", dtype="decimal")
        if i < 480:
            kb.ent(p, "birthPlace", rng.choice(places))
        if 200 <= i < 360:
            kb.ent(p, "spouse", rng.choice(persons))
        if 350 <= i < 490:
            kb.lit(p, "playerId", rng.randint(10000, 99999))
        if i < 50:
            kb.lit(p, "nickname", f"{rng.choice(LAST).lower()}y")

    child_counts = {}
    for i in range(300):
        k = rng.choices([1, 2, 3, 4, 5, 6], weights=[20, 30, 25, 15, 7, 3])[0]
        kids = rng.sample([q for q in persons if q != persons[i]], k)
        child_counts[persons[i]] = k
        for c in kids:
            kb.ent(persons[i], "child", c)
    for i in range(150, 400):
        p = persons[i]
        if p in child_counts:
            v = child_counts[p] if rng.random() < 0.8 else child_counts[p] + rng.randint(1, 2)
            if i % 5 == 0:
                kb.lit(p, "numberOfChildren", v, dtype="integer")
            else:
                kb.lit(p, "numberOfChildren", v)
        else:
            kb.lit(p, "numberOfChildren", rng.randint(1, 6))

    award_counts = {}
    for i in range(100, 400):
        k = rng.randint(1, 4)
        award_counts[persons[i]] = k
        for a in rng.sample(awards, k):
            kb.ent(persons[i], "award", a)
    for i in range(250, 450):
        p = persons[i]
        if p in award_counts:
            v = award_counts[p] if rng.random() < 0.75 else award_counts[p] + rng.randint(1, 3)
        else:
            v = rng.randint(1, 5)
        kb.lit(p, "numberOfAwards", v)

    students = {u: 0 for u in universities}
    for i in range(450):
        for u in rng.sample(universities, rng.choice([1, 1, 2])):
            kb.ent(persons[i], "almaMater", u)
            students[u] += 1
    for u in universities:
        kb.lit(u, "numberOfStudents", students[u] * rng.randint(800, 1500))

    lang_counts = {}
    for i in range(220):
        k = rng.randint(2, 4)
        lang_counts[persons[i]] = k
        kb.lit(persons[i], "languages", ", ".join(rng.sample(LANGS, k)))
    for i in range(100, 280):
        p = persons[i]
        kb.lit(p, "numberOfLanguages", lang_counts.get(p, rng.randint(1, 3)))

    # organizations
    emp_counts = {}
    for o in orgs[40:]:
        k = rng.randint(3, 12)
        emp_counts[o] = k
        for p in rng.sample(persons, k):
            kb.ent(o, "employee", p)
    for o in orgs[50:]:
        v = emp_counts[o] * rng.randint(1, 3) if rng.random() < 0.5 else emp_counts[o]
        kb.lit(o, "numberOfEmployees", v)
    for i, o in enumerate(orgs):
        kb.lit(o, "foundingYear", rng.randint(1900, 2015))
        kb.ent(o, "location", rng.choice(places))
        kb.lit(o, "postalCode", f"D-{rng.randint(10000, 99999)}")
        if i < 49:
            kb.lit(o, "motto", f"Motto {i}")

    # places
    for i, p in enumerate(places):
        kb.lit(p, "population", rng.randint(10000, 5000000))
        kb.lit(p, "elevation", rng.randint(0, 3000))
        kb.ent(p, "country", countries[i % len(countries)])

    # works
    for i, s in enumerate(series):
        k = rng.randint(5, 15)
        for j in range(k):
            ep = f"Episode_{i}_{j}"
            kb.classes[ep] = "Work"
            kb.ent(s, "episode", ep)
        if i < 70:
            kb.lit(s, "numberOfEpisodes", k if rng.random() < 0.9 else k + rng.randint(1, 10))
        if i >= 10:
            kb.lit(s, "numberOfSeasons", max(1, k // rng.randint(3, 6)))
        kb.lit(s, "releaseYear", rng.randint(1950, 2019))
    for f in films:
        for p in rng.sample(persons[:300], rng.randint(2, 6)):
            kb.ent(f, "starring", p)
        kb.lit(f, "runtime", rng.randint(80, 180))
        kb.lit(f, "budget", f"{rng.uniform(1e5, 2e8):.1f}", dtype="decimal")
        kb.lit(f, "releaseYear", rng.randint(1930, 2019))

    for e in events:
        for o in rng.sample(orgs, rng.randint(2, 4)):
            kb.ent(e, "participant", o)

    return kb


# Set-predicate ground truth: (enumerating, counting) per predicate IRI label.
ENUMERATING_YES = {
    "child", "child^-1", "award", "award^-1", "starring", "starring^-1", "almaMater", "almaMater^-1",
    "employee", "languages", "episode", "birthPlace^-1", "location^-1", "country^-1", "participant",
    "participant^-1",
}
COUNTING_YES = {
    "numberOfChildren", "numberOfAwards", "numberOfStudents", "numberOfLanguages", "numberOfEmployees",
    "numberOfEpisodes", "numberOfSeasons", "population",
}

SUBJECT_TYPE = {
    "child": "Person", "child^-1": "Person", "award": "Person", "starring^-1": "Person",
    "almaMater": "Person", "languages": "Person", "employee^-1": "Person",
    "numberOfChildren": "Person", "numberOfAwards": "Person", "numberOfLanguages": "Person",
    "employee": "Organization", "almaMater^-1": "Organization", "participant^-1": "Organization",
    "numberOfEmployees": "Organization", "numberOfStudents": "Organization",
    "episode": "Work", "starring": "Work", "numberOfEpisodes": "Work", "numberOfSeasons": "Work",
    "birthPlace^-1": "Place", "location^-1": "Place", "country^-1": "Place", "population": "Place",
}

RELEVANCE = {
    ("child", "numberOfChildren"): ("High", "Complete"),
    ("award", "numberOfAwards"): ("High", "Complete"),
    ("languages", "numberOfLanguages"): ("High", "Complete"),
    ("employee", "numberOfEmployees"): ("High", "Incomplete"),
    ("episode", "numberOfEpisodes"): ("High", "Complete"),
    ("episode", "numberOfSeasons"): ("Moderate", "Incomplete"),
    ("almaMater^-1", "numberOfStudents"): ("High", "Incomplete"),
    ("birthPlace^-1", "population"): ("Moderate", "Incomplete"),
    ("location^-1", "population"): ("Low", "Incomplete"),
}

PREDICATES = [
    "name", "birthYear", "height", "birthPlace", "spouse", "playerId", "nickname", "child",
    "numberOfChildren", "award", "numberOfAwards", "almaMater", "numberOfStudents", "languages",
    "numberOfLanguages", "employee", "numberOfEmployees", "foundingYear", "location", "postalCode",
    "motto", "population", "elevation", "country", "episode", "numberOfEpisodes", "numberOfSeasons",
    "releaseYear", "starring", "runtime", "budget", "participant",
]
ENTITY_VALUED = {"birthPlace", "spouse", "child", "award", "almaMater", "employee", "location", "country",
                 "episode", "starring", "participant"}


def responses(rng, truth, n=5):
    agree = ["Yes", "MaybeYes"] if truth else ["No", "MaybeNo"]
    disagree = ["MaybeNo", "DoNotKnow"] if truth else ["MaybeYes", "DoNotKnow"]
    return [rng.choice(agree) if rng.random() < 0.85 else rng.choice(disagree) for _ in range(n)]


def class_judgments(rng):
    out = []
    for name in PREDICATES:
        names = [name] + ([name + "^-1"] if name in ENTITY_VALUED else [])
        for n in names:
            out.append({"predicate": ONT + n, "kb": "custom", "kind": "enumerating",
                        "responses": responses(rng, n in ENUMERATING_YES)})
            if not n.endswith("^-1"):
                out.append({"predicate": ONT + n, "kb": "custom", "kind": "counting",
                            "responses": responses(rng, n in COUNTING_YES)})
    return out


def relevance_judgments(rng):
    enums = [p for p in SUBJECT_TYPE if p in ENUMERATING_YES]
    counts = [p for p in SUBJECT_TYPE if p in COUNTING_YES]
    out = []
    for c in counts:
        for e in enums:
            if SUBJECT_TYPE[e] != SUBJECT_TYPE[c]:
                continue
            rel, comp = RELEVANCE.get((e, c), ("None", "Unrelated"))
            for direction, source, target in (("counting_to_enumerating", c, e),
                                              ("enumerating_to_counting", e, c)):
                rs = []
                for _ in range(3):
                    if rng.random() < 0.8:
                        rs.append({"relatedness": rel, "completeness": comp})
                    else:
                        rs.append({"relatedness": rng.choice(["Moderate", "Low", "None"]),
                                   "completeness": rng.choice(["Incomplete", "Unrelated"])})
                out.append({"source": ONT + source, "target": ONT + target, "direction": direction,
                            "responses": rs})
    return out


# Phrase forms match the label inflection used by the feature stage.
FREQ = [
    ("child", 87000000), ("children", 128000000),
    ("birthplace", 21000000), ("birthplaces", 1550000),
    ("birth place", 21000000), ("birth places", 1550000),
    ("number of child", 150000), ("number of children", 9800000),
    ("award", 310000000), ("awards", 540000000),
    ("number of award", 90000), ("number of awards", 4100000),
    ("starring", 95000000), ("starrings", 12000),
    ("alma mater", 24000000), ("alma maters", 610000),
    ("number of student", 210000), ("number of students", 38000000),
    ("employee", 420000000), ("employees", 650000000),
    ("number of employee", 180000), ("number of employees", 52000000),
    ("episode", 880000000), ("episodes", 1020000000),
    ("number of episode", 120000), ("number of episodes", 11000000),
    ("number of season", 60000), ("number of seasons", 3900000),
    ("language", 1400000000), ("languages", 980000000),
    ("number of language", 70000), ("number of languages", 6100000),
    ("birth year", 9000000), ("birth years", 410000),
    ("height", 900000000), ("heights", 140000000),
    ("spouse", 120000000), ("spouses", 31000000),
    ("player id", 2100000), ("player ids", 190000),
    ("name", 5200000000), ("names", 2100000000),
    ("founding year", 1700000), ("founding years", 52000),
    ("location", 2300000000), ("locations", 1100000000),
    ("postal code", 160000000), ("postal codes", 21000000),
    ("motto", 41000000), ("mottos", 2600000),
    ("population", 870000000), ("populations", 160000000),
    ("elevation", 150000000), ("elevations", 19000000),
    ("country", 3100000000), ("countries", 2600000000),
    ("release year", 7200000), ("release years", 380000),
    ("budget", 1200000000), ("budgets", 140000000),
    ("participant", 260000000), ("participants", 610000000),
]

CONCEPTS = {
    "child": ["child", "children"],
    "award": ["award", "awards"],
    "language": ["language", "languages"],
    "employee": ["employee", "employees"],
    "episode": ["episode", "episodes"],
    "season": ["season", "seasons"],
    "student": ["student", "students", "alma", "mater"],
    "population": ["population"],
}
SINGLETONS = ["name", "birth", "place", "year", "height", "spouse", "player", "id", "founding", "location",
              "postal", "code", "motto", "elevation", "country", "release", "starring", "runtime", "budget",
              "participant", "nickname"]


def embeddings(rng, dim=12):
    def vec(scale=1.0):
        return [rng.gauss(0.0, scale) for _ in range(dim)]

    rows = []
    for concept, words in CONCEPTS.items():
        base = vec()
        if concept == "season":
            base = [0.6 * a + 0.4 * b for a, b in zip(CONCEPT_BASES["episode"], base)]
        CONCEPT_BASES[concept] = base
        for w in words:
            rows.append((w, [b + rng.gauss(0.0, 0.15) for b in base]))
    for w in SINGLETONS:
        rows.append((w, vec()))
    for w in ("number", "of"):
        rows.append((w, vec(0.2)))
    return rows


CONCEPT_BASES = {}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data" / "fixture"))
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)

    kb = generate(rng)
    lines = list(kb.lines)
    # Parser exercise: duplicates, comments, blank and malformed lines.
    for i in range(5):
        lines.insert(100 * (i + 1), lines[10 * i])
    lines.insert(0, "# fixture KB, generated by tools/gen_fixture.py")
    lines.insert(500, "")
    lines.insert(1000, f"{iri('Person_1')} {prop('name')} \"unterminated .")
    lines.insert(2000, f"{iri('Person_2')} {prop('name')}")
    lines.insert(3000, "this is not a triple")
    (out / "kb.nt").write_text("\n".join(lines) + "\n")

    with open(out / "class_map.tsv", "w") as f:
        for e in sorted(kb.classes):
            f.write(f"{RES}{e}\t{kb.classes[e]}\n")

    with open(out / "freq.tsv", "w") as f:
        for term, count in FREQ:
            f.write(f"{term}\t{count}\n")

    with open(out / "embeddings.txt", "w") as f:
        for w, v in embeddings(rng):
            f.write(w + " " + " ".join(f"{x:.6f}" for x in v) + "\n")

    with open(out / "class_judgments.jsonl", "w") as f:
        for j in class_judgments(rng):
            f.write(json.dumps(j) + "\n")

    with open(out / "relevance_judgments.jsonl", "w") as f:
        for j in relevance_judgments(rng):
            f.write(json.dumps(j) + "\n")

    config = {
        "seed": args.seed,
        "kb": "custom",
        "work_dir": "run",
        "ingest": {"input": "kb.nt", "format": "ntriples", "inverse": True, "dedup": True, "date_heuristic": True},
        "stats": {"min_count": 50},
        "profile": {"class_map": "class_map.tsv", "samples": 100},
        "features": {"freq_table": "freq.tsv", "embeddings": "embeddings.txt", "embedding_columns": False,
                     "kinds": ["enumerating", "counting"]},
        "train": {"model": "lasso", "labels": "class_judgments.jsonl"},
        "classify": {"id_filter": "post"},
        "align": {"min_support": 50, "k": 3, "directions": ["counting_to_enumerating", "enumerating_to_counting"],
                  "combine": "normalized", "aggregation": "max"},
        "evaluate": {"judgments": "relevance_judgments.jsonl", "ndcg_k": [1, 3]},
        "service": {"host": "127.0.0.1", "port": 8080, "workers": 4, "cors_origin": "*"},
    }
    (out / "config.json").write_text(json.dumps(config, indent=2) + "\n")
    print(f"{len(kb.lines)} triples written to {out / 'kb.nt'}")


if __name__ == "__main__":
    main()
