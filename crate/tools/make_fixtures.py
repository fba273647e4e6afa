"""Regenerates the CLI test fixtures. Output is fully determined by SEED."""

import csv
import json
import random
from pathlib import Path

SEED = 20170717
OUT = Path(__file__).resolve().parent.parent / "crates" / "cli" / "tests" / "fixtures"

NAMES = ["The Wrestlers", "Blue Spice", "The Eagle", "Zizzi", "The Mill", "Cotto", "Fitzbillies",
         "The Punter", "Loch Fyne", "Aromi", "The Golden Curry", "Strada", "The Phoenix", "Alimentum"]
NEAR = ["Café Rouge", "The Bakers", "Burger King", "Raja Indian Cuisine", "Avalon", "Clare Hall"]
EAT = ["restaurant", "pub", "coffee shop"]
FOOD = ["French", "Italian", "Indian", "Chinese", "English", "Japanese", "Fast food"]
PRICE = ["cheap", "moderate", "high", "less than £20", "£20-25", "more than £30"]
RATING = ["low", "average", "high", "1 out of 5", "3 out of 5", "5 out of 5"]
AREA = ["riverside", "city centre"]

PRICE_TEXT = {"cheap": "cheap", "moderate": "moderately priced", "high": "expensive",
              "less than £20": "less than £20", "£20-25": "£20-25", "more than £30": "more than £30"}
RATING_TEXT = {"low": "a low customer rating", "average": "an average customer rating",
               "high": "a high customer rating", "1 out of 5": "a rating of 1 out of 5",
               "3 out of 5": "a rating of 3 out of 5", "5 out of 5": "a rating of 5 out of 5"}


def make_mr(rng):
    slots = [("name", rng.choice(NAMES)), ("eatType", rng.choice(EAT))]
    for attr, values, p in [("food", FOOD, 0.7), ("priceRange", PRICE, 0.6), ("customer rating", RATING, 0.5),
                            ("area", AREA, 0.6), ("familyFriendly", ["yes", "no"], 0.5), ("near", NEAR, 0.4)]:
        if rng.random() < p:
            slots.append((attr, rng.choice(values)))
    return slots


def mr_text(slots):
    return ", ".join(f"{a}[{v}]" for a, v in slots)


def realize(slots, rng, skip=0.0):
    d = dict(slots)
    kept = {a: v for a, v in d.items() if a in ("name", "eatType") or rng.random() >= skip}
    first = f"{kept['name']} is a"
    if "priceRange" in kept and kept["priceRange"] in ("cheap", "moderate", "high"):
        first += f" {PRICE_TEXT[kept.pop('priceRange')]}"
    if "food" in kept:
        first += f" {kept.pop('food')}"
    first += f" {kept['eatType']}"
    if "area" in kept:
        first += " by the riverside" if kept.pop("area") == "riverside" else " in the city centre"
    if "near" in kept:
        first += f" near {kept.pop('near')}"
    parts = [first + "."]
    extra = []
    if "priceRange" in kept:
        extra.append(f"prices are {kept.pop('priceRange')}")
    if "customer rating" in kept:
        extra.append(f"it has {RATING_TEXT[kept.pop('customer rating')]}")
    if "familyFriendly" in kept:
        extra.append("it is family friendly" if kept.pop("familyFriendly") == "yes" else "it is not family friendly")
    if extra:
        s = ", and ".join(extra) if len(extra) == 2 else ", ".join(extra)
        parts.append(s[0].upper() + s[1:] + ".")
    return " ".join(parts)


def degrade(text, rng, level):
    words = text.split()
    for _ in range(level):
        if len(words) < 3:
            break
        op = rng.randrange(3)
        i = rng.randrange(len(words))
        if op == 0:
            del words[i]
        elif op == 1:
            j = rng.randrange(len(words))
            words[i], words[j] = words[j], words[i]
        else:
            words.insert(i, rng.choice(["very", "really", "nice", "place", "food", "the"]))
    return " ".join(words)


def e2e_csv(rng):
    rows = []
    for _ in range(100):
        slots = make_mr(rng)
        rows.append((mr_text(slots), realize(slots, rng, skip=0.25)))
    with open(OUT / "e2e_100.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
        w.writerow(["mr", "ref"])
        w.writerows(rows)


def ratings_jsonl(rng):
    lines = []
    for i in range(60):
        slots = make_mr(rng)
        refs = [realize(slots, rng), realize(slots, rng, skip=0.3)]
        outputs = {
            "system_a": degrade(realize(slots, rng, skip=0.1), rng, 1),
            "system_b": degrade(realize(slots, rng, skip=0.3), rng, 3),
            "system_c": degrade(realize(slots, rng, skip=0.5), rng, 6),
        }
        ratings = {}
        for k, base in [("system_a", 5.0), ("system_b", 3.8), ("system_c", 2.6)]:
            ratings[k] = {
                aspect: min(6, max(1, round(base + rng.gauss(0, 1.1))))
                for aspect in ("informativeness", "naturalness", "quality")
            }
        lines.append(json.dumps({"id": f"item-{i:03d}", "mr": mr_text(slots), "references": refs,
                                 "outputs": outputs, "ratings": ratings}, ensure_ascii=False))
    (OUT / "ratings.jsonl").write_text("\n".join(lines) + "\n", encoding="utf-8")


def lexicon():
    lex = {
        "eatType": {v: [] for v in EAT},
        "food": {v: [] for v in FOOD},
        "priceRange": {v: [] for v in PRICE},
        "customer rating": {v: [] for v in RATING},
        "area": {"riverside": ["by the river", "river"], "city centre": ["city center", "centre of the city"]},
        "familyFriendly": {"yes": ["family friendly", "kid friendly", "family-friendly"],
                           "no": ["not family friendly", "not kid friendly", "adults only"]},
    }
    lex["priceRange"]["moderate"] = ["moderately priced"]
    lex["priceRange"]["high"] = ["expensive"]
    lex["eatType"]["coffee shop"] = ["café", "coffee house"]
    lex["customer rating"]["5 out of 5"] = ["5 stars", "five stars"]
    (OUT / "lexicon.json").write_text(json.dumps(lex, indent=2, ensure_ascii=False, sort_keys=True) + "\n",
                                      encoding="utf-8")


def validate_sets():
    good = [
        ("name[The Wrestlers], eatType[pub], priceRange[cheap], customer rating[low]",
         "The Wrestlers is a cheap pub with a low customer rating."),
        ("name[Blue Spice], eatType[restaurant], food[French], area[riverside]",
         "Blue Spice is a French restaurant by the riverside."),
        ("name[The Eagle], eatType[coffee shop], priceRange[high]",
         "The Eagle is an expensive coffee shop with high prices."),
        ("name[Zizzi], eatType[pub], food[Italian], familyFriendly[yes]",
         "Zizzi is a family friendly pub that serves Italian food."),
        ("name[Cotto], eatType[restaurant], area[city centre], near[The Bakers]",
         "Cotto is a restaurant in the city centre near The Bakers."),
    ]
    bad = [
        ("name[The Wrestlers], eatType[pub], priceRange[cheap]", ""),
        ("name[Blue Spice], eatType[restaurant]", "Nice place."),
        ("name[The Eagle], eatType[pub], priceRange[cheap]", "The Eagle is chep."),
        ("name[Zizzi], eatType[pub], food[Italian]", "Zizzi is an Indian pub by the riverside."),
        ("name[Cotto], eatType[restaurant], area[city centre]", "Good food, really good food."),
    ]
    mixed = [good[0], bad[0], good[1], bad[1], good[2], bad[2], good[3], bad[3], good[4], bad[4]]
    for name, rows in [("validate_all_pass.csv", good), ("validate_all_fail.csv", bad), ("validate_mixed.csv", mixed)]:
        with open(OUT / name, "w", newline="", encoding="utf-8") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["mr", "ref"])
            w.writerows(rows)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    rng = random.Random(SEED)
    e2e_csv(rng)
    ratings_jsonl(rng)
    lexicon()
    validate_sets()
    (OUT / "run.conf").write_text(
        "# sample run configuration\n"
        "metrics = bleu, ter, rouge_1, rouge_2, rouge_l, semsim, gbm\n"
        "bleu.max_n = 4\n"
        "bleu.smoothing = none\n"
        "bootstrap.seed = 42\n"
        "bootstrap.resamples = 500\n"
        "msttr.segment_size = 50\n",
        encoding="utf-8",
    )


if __name__ == "__main__":
    main()
