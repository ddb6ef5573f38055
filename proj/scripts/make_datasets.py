# Copyright 2026 The MultiQ-NLP Authors

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at

#     http://www.apache.org/licenses/LICENSE-2.0

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates data/lexicon.tsv and the JSON-lines datasets.

Output is deterministic for a given --seed. Images are referenced by id
only; feature vectors come from features.csv or `multiq features gen`.
"""

import argparse
import json
import random
from pathlib import Path

DETERMINERS = ["a", "an", "the"]
ADJECTIVES = ["tall", "small", "young", "old", "little", "big", "happy", "red",
              "black", "white", "brown", "wet"]
ANIMATE = ["child", "mother", "father", "man", "woman", "boy", "girl", "dog",
           "cat", "horse", "baby", "teacher", "player", "puppy", "sister",
           "brother"]
PLURALS = {"dogs": "dog", "cats": "cat", "children": "child", "men": "man",
           "women": "woman", "boys": "boy", "girls": "girl", "horses": "horse"}
OWNED = ["hand", "arm", "leg", "ball", "bag", "toy", "head", "shoulder"]
PLACES = ["road", "park", "beach", "grass", "street", "field", "snow", "bed",
          "sofa", "floor", "water", "table"]
PREPOSITIONS = ["on", "in", "near", "under", "beside"]

# (third person, plural) forms; the structured task uses 13 verbs.
TRANSITIVE = [("holds", "hold"), ("chases", "chase"), ("feeds", "feed"),
              ("kicks", "kick"), ("pushes", "push"), ("hugs", "hug"),
              ("carries", "carry"), ("follows", "follow"),
              ("watches", "watch"), ("bites", "bite"), ("pulls", "pull"),
              ("lifts", "lift"), ("touches", "touch")]
INTRANSITIVE = ["sitting", "running", "sleeping", "jumping", "standing",
                "swimming", "eating", "walking", "lying", "playing"]
AUXILIARIES = ["is", "are"]


def article(word):
    return "an" if word[0] in "aeiou" else "a"


def det_phrase(rng, noun, allow_adj=True):
    adj = rng.choice(ADJECTIVES) if allow_adj and rng.random() < 0.35 else None
    head = f"{adj} {noun}" if adj else noun
    det = rng.choice(["the", article(head.split()[0])])
    return f"{det} {head}"


def capitalize(text):
    return text[0].upper() + text[1:]


def structured(rng):
    entries = []
    for verb, plural_verb in TRANSITIVE:
        seen = set()
        k = 0
        if verb == "holds":
            pos, neg = "a child holds the mother's hand", "the mother holds a child's hand"
            seen.add(pos)
            entries.append({"pos_sentence": capitalize(pos),
                            "neg_sentence": capitalize(neg),
                            "image": f"svo-{verb}-{k:02d}"})
            k += 1
        while k < 10:
            form = rng.random()
            if form < 0.15:
                plurals = list(PLURALS)
                subj, obj = rng.sample(plurals, 2)
                pos = f"{subj} {plural_verb} {obj}"
                neg = f"{obj} {plural_verb} {subj}"
            else:
                subj_noun, obj_noun = rng.sample(ANIMATE, 2)
                subj = det_phrase(rng, subj_noun)
                obj = det_phrase(rng, obj_noun)
                owned = f"'s {rng.choice(OWNED)}" if form < 0.45 else ""
                pp = ""
                if 0.45 <= form < 0.6:
                    pp = f" {rng.choice(PREPOSITIONS)} the {rng.choice(PLACES)}"
                pos = f"{subj} {verb} {obj}{owned}{pp}"
                neg = f"{obj} {verb} {subj}{owned}{pp}"
            key = pos.lower()
            if key in seen:
                continue
            seen.add(key)
            entries.append({"pos_sentence": capitalize(pos),
                            "neg_sentence": capitalize(neg),
                            "image": f"svo-{verb}-{k:02d}"})
            k += 1
    return entries


def unstructured(rng, count):
    entries = []
    seen = set()
    while len(entries) < count:
        noun = rng.choice(ANIMATE)
        place = rng.choice(PLACES)
        prep = rng.choice(PREPOSITIONS)
        if rng.random() < 0.6:
            verb, other = rng.sample(INTRANSITIVE, 2)
            subj = det_phrase(rng, noun, allow_adj=rng.random() < 0.5)
            sentence = f"{subj} is {verb} {prep} the {place}"
            pos = f"img-{noun}-{verb}-{place}"
            neg = f"img-{noun}-{other}-{place}"
        else:
            (verb, _), (other, _) = rng.sample(TRANSITIVE, 2)
            obj_noun = rng.choice([n for n in ANIMATE if n != noun])
            subj = det_phrase(rng, noun)
            obj = det_phrase(rng, obj_noun)
            sentence = f"{subj} {verb} {obj}"
            if rng.random() < 0.3:
                sentence += f" {prep} the {place}"
            pos = f"img-{noun}-{verb}-{obj_noun}"
            neg = f"img-{noun}-{other}-{obj_noun}"
        key = (sentence, pos, neg)
        if key in seen:
            continue
        seen.add(key)
        entries.append({"sentence": capitalize(sentence),
                        "pos_image": pos, "neg_image": neg})
    return entries


def lexicon_lines():
    rows = [("'s", "POSSESSIVE")]
    rows += [(w, "DETERMINER") for w in DETERMINERS]
    rows += [(w, "ADJECTIVE") for w in ADJECTIVES]
    nouns = sorted(set(ANIMATE + list(PLURALS) + OWNED + PLACES))
    rows += [(w, "NOUN") for w in nouns]
    rows += [(w, "PREPOSITION") for w in PREPOSITIONS]
    for third, plural in TRANSITIVE:
        rows += [(third, "TRANSITIVE_VERB"), (plural, "TRANSITIVE_VERB")]
    rows += [(w, "INTRANSITIVE_VERB") for w in INTRANSITIVE]
    rows += [(w, "AUXILIARY") for w in AUXILIARIES]
    return ["# word\tcategory"] + [f"{w}\t{c}" for w, c in rows]


def write_jsonl(path, entries):
    with open(path, "w", encoding="utf-8") as f:
        for e in entries:
            f.write(json.dumps(e) + "\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path(__file__).parent.parent / "data")
    ap.add_argument("--seed", type=int, default=2026)
    ap.add_argument("--sample", type=int, default=20)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "lexicon.tsv").write_text("\n".join(lexicon_lines()) + "\n")
    s = structured(rng)
    u = unstructured(rng, 350)
    write_jsonl(args.out / "structured.jsonl", s)
    write_jsonl(args.out / "unstructured.jsonl", u)
    write_jsonl(args.out / "structured_sample.jsonl",
                random.Random(args.seed + 1).sample(s, args.sample))
    write_jsonl(args.out / "unstructured_sample.jsonl",
                random.Random(args.seed + 2).sample(u, args.sample))


if __name__ == "__main__":
    main()
