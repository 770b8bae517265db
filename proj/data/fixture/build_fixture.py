#!/usr/bin/env python3
"""Writes the offline fixture: mini knowledge graph, VG-style and GLDv2-style
annotations, scene relations and a WordNet offset index.

Run from anywhere; files land next to this script. Output is deterministic.
"""
import csv
import io
import json
from pathlib import Path

HERE = Path(__file__).resolve().parent

P = {
    "instance of": "P31",
    "subclass of": "P279",
    "architect": "P84",
    "country": "P17",
    "height": "P2048",
    "width": "P2049",
    "official language": "P37",
    "currency": "P38",
    "capital": "P36",
    "mother": "P25",
    "place of birth": "P19",
    "date of birth": "P569",
    "sex or gender": "P21",
    "continent": "P30",
    "inception": "P571",
    "discoverer or inventor": "P61",
    "time of discovery or invention": "P575",
    "population": "P1082",
    "located in the administrative territorial entity": "P131",
    "parent taxon": "P171",
    "made from material": "P186",
    "life expectancy": "P2250",
    "country of citizenship": "P27",
    "main food source": "P1034",
}


def ent(target):
    return {"kind": "entity", "id": target}


def num(value, unit=None):
    obj = {"kind": "number", "value": value}
    if unit:
        obj["unit"] = unit
    return obj


def date(value, precision):
    return {"kind": "date", "value": value, "precision": precision}


def lit(value):
    return {"kind": "literal", "value": value}


ENTITIES = {}


def add(eid, label, facts=(), synsets=(), commons=None):
    statements = [
        {"property_id": P[prop], "property_label": prop, "object": obj}
        for prop, obj in facts
    ]
    entry = {"label": label, "synsets": list(synsets), "statements": statements}
    if commons:
        entry["commons_name"] = commons
    ENTITIES[eid] = entry


# classes
add("E100", "church")
add("E101", "skyscraper")
add("E102", "tower")
add("E103", "lattice tower")
add("E104", "human")
add("E105", "country", [("subclass of", ent("E106"))])
add("E106", "political territorial entity")
add("E107", "capital city", [("subclass of", ent("E108"))])
add("E108", "city")
add("E109", "signalling device")
add("E110", "motor vehicle")
add("E111", "domestic animal")
add("E112", "furniture")
add("E113", "toy")
add("E114", "taxon")
add("E115", "building")

# landmarks
add("E1", "Test Tower", [
    ("instance of", ent("E102")),
    ("architect", ent("E40")),
    ("country", ent("E20")),
    ("height", num(100, "metre")),
    ("width", num(20, "metre")),
    ("located in the administrative territorial entity", ent("E99")),
], commons="Test Tower")
add("E2", "Maria Magdalena Church", [
    ("instance of", ent("E100")),
    ("architect", ent("E43")),
    ("country", ent("E20")),
    ("height", num(72, "metre")),
    ("inception", date("1634", "year")),
    ("located in the administrative territorial entity", ent("E30")),
], commons="Maria Magdalena kyrka, Stockholm")
add("E3", "Petronas Towers", [
    ("instance of", ent("E101")),
    ("instance of", ent("E115")),
    ("architect", ent("E41")),
    ("country", ent("E21")),
    ("height", num(451.9, "metre")),
    ("inception", date("1999", "year")),
    ("located in the administrative territorial entity", ent("E31")),
], commons="Petronas Towers")
add("E4", "Eiffel Tower", [
    ("instance of", ent("E103")),
    ("architect", ent("E42")),
    ("country", ent("E22")),
    ("height", num(330, "metre")),
    ("inception", date("1889-03-31", "day")),
    ("located in the administrative territorial entity", ent("E32")),
], commons="Eiffel Tower")
# buildings that only widen the architect pool
add("E5", "Fallingwater", [("instance of", ent("E115")), ("architect", ent("E44"))])
add("E6", "Turning Torso", [("instance of", ent("E101")), ("architect", ent("E45")), ("country", ent("E20"))])
# only "subclass of"; not depicted in any image
add("E7", "spinning top", [("subclass of", ent("E113"))], synsets=["12345678-n"])

# countries
add("E20", "Sweden", [
    ("instance of", ent("E105")),
    ("capital", ent("E33")),
    ("official language", ent("E50")),
    ("currency", ent("E55")),
    ("continent", ent("E60")),
    ("population", num(10551707)),
])
add("E21", "Malaysia", [
    ("instance of", ent("E105")),
    ("capital", ent("E31")),
    ("official language", ent("E51")),
    ("currency", ent("E56")),
    ("continent", ent("E61")),
    ("population", num(34308525)),
])
add("E22", "France", [
    ("instance of", ent("E105")),
    ("capital", ent("E34")),
    ("official language", ent("E52")),
    ("currency", ent("E57")),
    ("continent", ent("E60")),
    ("population", num(68373433)),
])
add("E23", "Argentina", [
    ("instance of", ent("E105")),
    ("capital", ent("E35")),
    ("official language", ent("E53")),
    ("currency", ent("E58")),
    ("continent", ent("E62")),
])
add("E24", "Germany", [
    ("instance of", ent("E105")),
    ("capital", ent("E36")),
    ("official language", ent("E54")),
    ("currency", ent("E57")),
    ("continent", ent("E60")),
])

# places
add("E30", "Södermalm", [("population", num(129874))])
add("E31", "Kuala Lumpur", [
    ("instance of", ent("E107")), ("country", ent("E21")), ("population", num(1982112)),
])
add("E32", "7th arrondissement of Paris", [("country", ent("E22")), ("population", num(48354))])
add("E33", "Stockholm", [
    ("instance of", ent("E107")), ("country", ent("E20")), ("population", num(984748)),
])
add("E34", "Paris", [("instance of", ent("E107")), ("country", ent("E22")), ("population", num(2102650))])
add("E35", "Buenos Aires", [("instance of", ent("E107")), ("country", ent("E23"))])
add("E36", "Berlin", [("instance of", ent("E107")), ("country", ent("E24"))])
add("E37", "San Miguel de Tucumán", [("instance of", ent("E108")), ("country", ent("E23"))])
add("E38", "Nottingham", [("instance of", ent("E108"))])
add("E39", "Mühlburg", [("instance of", ent("E108")), ("country", ent("E24"))])
add("E46", "Stralsund", [("instance of", ent("E108")), ("country", ent("E24"))])
add("E47", "Gothenburg", [("instance of", ent("E108")), ("country", ent("E20"))])
# no English label: dropped on load, and so is the statement pointing at it
ENTITIES["E99"] = {"label": {"sv": "Gamla stan"}, "synsets": [], "statements": []}

# people
add("E40", "Anna Berg", [
    ("instance of", ent("E104")),
    ("date of birth", date("1950", "year")),
    ("place of birth", ent("E47")),
    ("sex or gender", ent("E70")),
    ("country of citizenship", ent("E20")),
    ("mother", ent("E48")),
])
add("E48", "Karin Berg", [
    ("instance of", ent("E104")),
    ("date of birth", date("1921", "year")),
    ("sex or gender", ent("E70")),
])
add("E41", "César Pelli", [
    ("instance of", ent("E104")),
    ("date of birth", date("1926-10-12", "day")),
    ("place of birth", ent("E37")),
    ("sex or gender", ent("E71")),
    ("country of citizenship", ent("E23")),
])
add("E42", "Stephen Sauvestre", [
    ("instance of", ent("E104")),
    ("date of birth", date("1847-12-26", "day")),
    ("place of birth", ent("E34")),
    ("country of citizenship", ent("E22")),
])
add("E43", "Nicodemus Tessin the Elder", [
    ("instance of", ent("E104")),
    ("date of birth", date("1615-12-07", "day")),
    ("place of birth", ent("E46")),
    ("sex or gender", ent("E71")),
    ("country of citizenship", ent("E20")),
    ("mother", ent("E65")),
])
add("E44", "Frank Lloyd Wright", [("instance of", ent("E104")), ("date of birth", date("1867-06-08", "day"))])
add("E45", "Santiago Calatrava", [("instance of", ent("E104")), ("date of birth", date("1951-07-28", "day"))])
add("E49", "John Peake Knight", [
    ("instance of", ent("E104")),
    ("date of birth", date("1828-01-13", "day")),
    ("place of birth", ent("E38")),
])
add("E63", "Karl Benz", [
    ("instance of", ent("E104")),
    ("date of birth", date("1844-11-25", "day")),
    ("place of birth", ent("E39")),
    ("mother", ent("E64")),
])
add("E64", "Josephine Vaillant", [("instance of", ent("E104")), ("sex or gender", ent("E70"))])
add("E65", "Maria Tessin", [("instance of", ent("E104")), ("sex or gender", ent("E70"))])

# languages, currencies, continents, genders
for eid, label in [("E50", "Swedish"), ("E51", "Malay"), ("E52", "French"), ("E53", "Spanish"), ("E54", "German")]:
    add(eid, label)
for eid, label in [("E55", "Swedish krona"), ("E56", "Malaysian ringgit"), ("E57", "euro"), ("E58", "Argentine peso")]:
    add(eid, label)
for eid, label in [("E60", "Europe"), ("E61", "Asia"), ("E62", "South America")]:
    add(eid, label)
add("E70", "female")
add("E71", "male")

# VG concepts
add("E80", "traffic light", [
    ("subclass of", ent("E109")),
    ("discoverer or inventor", ent("E49")),
    ("time of discovery or invention", date("1868-12-09", "day")),
], synsets=["06887235-n"])
add("E81", "car", [
    ("subclass of", ent("E110")),
    ("discoverer or inventor", ent("E63")),
    ("time of discovery or invention", date("1886", "year")),
], synsets=["02958343-n"])
add("E82", "dog", [
    ("subclass of", ent("E111")),
    ("parent taxon", ent("E90")),
    ("life expectancy", num(13, "year")),
    ("main food source", ent("E92")),
], synsets=["02084071-n"])
add("E83", "bench", [("subclass of", ent("E112")), ("made from material", ent("E93"))], synsets=["02828884-n"])
add("E84", "kite", [("subclass of", ent("E113")), ("made from material", ent("E94"))], synsets=["03621049-n"])
# no class: generation skips it
add("E85", "zebra", [("parent taxon", ent("E95")), ("main food source", ent("E96"))], synsets=["02391049-n"])
# not depicted; widens the food pool
add("E86", "cat", [("subclass of", ent("E111")), ("main food source", ent("E97"))])
add("E90", "Canis lupus", [("instance of", ent("E114")), ("parent taxon", ent("E91"))])
add("E91", "Canis", [("instance of", ent("E114"))])
add("E95", "Equus", [("instance of", ent("E114"))])
add("E92", "meat")
add("E93", "wood")
add("E94", "paper")
add("E96", "grass")
add("E97", "fish")

WORDNET = [
    ("bench.n.01", "02828884-n"),
    ("car.n.01", "02958343-n"),
    ("dog.n.01", "02084071-n"),
    ("kite.n.03", "03621049-n"),
    ("sand.n.01", "15019030-n"),
    ("sidewalk.n.01", "04215402-n"),
    ("spinning_top.n.01", "12345678-n"),
    ("street.n.01", "04334599-n"),
    ("traffic_light.n.01", "06887235-n"),
    ("zebra.n.01", "02391049-n"),
]

# (prefix, objects, relations) per VG scene type; ten images each
SCENES = [
    ("1", [("1", "traffic_light.n.01"), ("2", "car.n.01"), ("3", "sidewalk.n.01")],
     [("2", "parked next to", "sidewalk"), ("1", "hanging over", "street")]),
    ("2", [("1", "dog.n.01"), ("2", "bench.n.01")],
     [("1", "sitting on", "bench")]),
    ("3", [("1", "kite.n.03"), ("2", "dog.n.01"), ("3", "zebra.n.01")],
     [("2", "running on", "sand"), ("1", "flying over", "beach")]),
]

LANDMARKS = [
    ("01", "Maria_Magdalena_kyrka,_Stockholm"),
    ("02", "Petronas_Towers"),
    ("03", "Eiffel_Tower"),
    ("04", "Test_Tower"),
]


def main():
    doc = {"entities": {k: ENTITIES[k] for k in sorted(ENTITIES, key=lambda e: int(e[1:]))}}
    (HERE / "kg.json").write_text(json.dumps(doc, ensure_ascii=False, indent=1) + "\n", encoding="utf-8")

    with open(HERE / "wordnet_index.tsv", "w", encoding="utf-8") as f:
        f.write("# lemma.pos.sense<TAB>offset-pos\n")
        for name, offset in WORDNET:
            f.write(f"{name}\t{offset}\n")

    objects, relations = [], []
    for prefix, objs, rels in SCENES:
        for n in range(1, 11):
            image_id = f"{prefix}{n:03d}"
            for oid, synset in objs:
                objects.append({"image_id": image_id, "object_id": oid, "synset_name": synset,
                                "bbox": [10 * int(oid), 20, 100, 80]})
            for oid, predicate, label in rels:
                relations.append({"image_id": image_id, "subject_object_id": oid,
                                  "predicate": predicate, "object_label": label})
    with open(HERE / "vg_objects.jsonl", "w", encoding="utf-8") as f:
        for o in objects:
            f.write(json.dumps(o, ensure_ascii=False) + "\n")
    with open(HERE / "vg_relations.jsonl", "w", encoding="utf-8") as f:
        for r in relations:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["image_id", "wikimedia_url"])
    for code, page in LANDMARKS:
        for n in range(1, 11):
            writer.writerow([f"gld-{code}{n:02d}", f"https://commons.wikimedia.org/wiki/Category:{page}"])
    writer.writerow(["gld-9901", "https://commons.wikimedia.org/wiki/Category:Unknown_Landmark"])
    (HERE / "gld.csv").write_text(buf.getvalue(), encoding="utf-8")


if __name__ == "__main__":
    main()
