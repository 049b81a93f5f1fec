#!/usr/bin/env python3
# Copyright 2026 The lexipipe Authors
# SPDX-License-Identifier: Apache-2.0
"""Generate the bundled synthetic news corpus.

Each article is built from short clauses over a one-syllable vocabulary with
some words swapped for harder synonyms from the simplification lexicon.
Articles differ in how many clauses share a sentence and how dense the hard
words are. The reference summary is the lead of the article with every hard
word restored to its plain form and every clause its own sentence.

Output is deterministic for a given seed.
"""

import argparse
import json
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent

SUBJECTS = [
    "The town", "The board", "The club", "The school", "The firm",
    "The state", "The court", "The team", "The crew", "The group",
    "The bank", "The farm", "The port", "The store", "The press",
    "The fleet", "The guild", "The camp", "The zoo", "The lab",
    "Our staff", "The mill", "The church", "The shop", "The crowd",
    "The council", "The city", "The village", "The market", "The mayor",
]

# (hard, plain) verbs in the past tense that take a direct object.
VERBS = [
    ("acquired", "got"), ("allocated", "gave"), ("constructed", "built"),
    ("demonstrated", "showed"), ("designated", "named"),
    ("disclosed", "told"), ("discontinued", "stopped"),
    ("evaluated", "judged"), ("generated", "made"),
    ("inaugurated", "launched"), ("manufactured", "made"),
    ("obtained", "got"), ("possessed", "owned"), ("prohibited", "banned"),
    ("purchased", "bought"), ("retained", "kept"),
    ("transmitted", "sent"), ("utilized", "used"), ("maintained", "kept"),
    ("eliminated", "cut"), ("observed", "saw"), ("criticized", "slammed"),
    ("encountered", "met"), ("requested", "asked"),
]
PLAIN_VERBS = ["built", "bought", "sold", "closed", "fixed", "signed",
               "moved", "kept", "named", "found", "checked", "cleaned"]

NOUNS = [
    ("vehicle", "car"), ("residence", "home"), ("procedure", "step"),
    ("objective", "goal"), ("institution", "school"),
    ("investigation", "probe"), ("violation", "breach"),
    ("consultation", "talk"), ("competition", "race"),
    ("alteration", "change"), ("opportunity", "chance"),
    ("legislation", "law"), ("intention", "aim"),
]
PLAIN_NOUNS = ["plan", "fund", "road", "bridge", "wall", "park", "deal",
               "loan", "fee", "rule", "site", "shed", "pool", "bus", "van",
               "boat", "stall", "tent", "clock", "pump", "gate", "roof",
               "budget", "project", "harbor", "garden", "tunnel", "program",
               "contract", "bridge", "engine"]

ADJECTIVES = [
    ("considerable", "large"), ("enormous", "huge"), ("additional", "more"),
    ("comprehensive", "full"), ("beneficial", "good"),
    ("complicated", "hard"), ("preliminary", "first"),
    ("initial", "first"), ("elevated", "high"), ("adjacent", "next"),
    ("identical", "same"),
]
PLAIN_ADJECTIVES = ["new", "old", "small", "big", "red", "long", "short",
                    "great", "wide", "fresh", "modern", "local",
                    "public", "costly"]

TAILS = ["last week", "this year", "each day", "at noon", "near the square",
         "by the lake", "in the north", "at dawn", "last spring", "in June",
         "on the coast", "for the fair", "in the west", "next door",
         "on Monday", "in April", "in the rain", "at the vote"]

JOINERS = [", and", " but", ", while", " after", " because", ", so"]

# name: (weight, clauses per sentence range, chance a slot is hard)
CLASSES = {
    "plain": (0.12, (1, 1), 0.0),
    "light": (0.25, (1, 2), 0.3),
    "dense": (0.23, (2, 3), 0.7),
    "long": (0.22, (3, 5), 0.6),
    "tangled": (0.12, (5, 6), 0.8),
    "knotted": (0.06, (11, 14), 0.8),
}


def article_for(word, following):
    return "an" if following[0].lower() in "aeiou" else "a"


def pick(rng, hard_pairs, plain_words, hard_rate):
    if rng.random() < hard_rate:
        hard, plain = rng.choice(hard_pairs)
        return hard, plain
    word = rng.choice(plain_words)
    return word, word


def clause(rng, hard_rate):
    """Returns (hard form, plain form) of one clause, lower-case start."""
    subject = rng.choice(SUBJECTS)
    verb_h, verb_p = pick(rng, VERBS, PLAIN_VERBS, hard_rate)
    words_h, words_p = [], []
    if rng.random() < 0.6:
        adj_h, adj_p = pick(rng, ADJECTIVES, PLAIN_ADJECTIVES, hard_rate)
        words_h.append(adj_h)
        words_p.append(adj_p)
    noun_h, noun_p = pick(rng, NOUNS, PLAIN_NOUNS, hard_rate)
    words_h.append(noun_h)
    words_p.append(noun_p)
    tail = rng.choice(TAILS)

    def render(verb, phrase):
        det = article_for(None, phrase[0])
        return f"{subject} {verb} {det} {' '.join(phrase)} {tail}"

    return render(verb_h, words_h), render(verb_p, words_p)


def lower_first(s):
    return s[0].lower() + s[1:] if not s.startswith("Our") else "our" + s[3:]


def sentence(rng, n_clauses, hard_rate):
    parts = [clause(rng, hard_rate) for _ in range(n_clauses)]
    hard = parts[0][0]
    for h, _ in parts[1:]:
        hard += rng.choice(JOINERS) + " " + lower_first(h)
    plain = [p + "." for _, p in parts]
    return hard + ".", plain


def make_article(rng, index):
    names = list(CLASSES)
    weights = [CLASSES[n][0] for n in names]
    kind = rng.choices(names, weights)[0]
    _, (lo, hi), hard_rate = CLASSES[kind]
    lead, reference = [], []
    for _ in range(5):
        hard, plain = sentence(rng, rng.randint(lo, hi), hard_rate)
        lead.append(hard)
        reference.extend(plain)
    extra = [sentence(rng, rng.randint(lo, hi), hard_rate)[0]
             for _ in range(rng.randint(2, 4))]
    return {
        "id": f"syn-{index:04d}",
        "article": " ".join(lead + extra),
        "reference_summary": " ".join(reference),
        "difficulty": kind,
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--count", type=int, default=200)
    parser.add_argument("--seed", type=int, default=1729)
    parser.add_argument("--out", type=Path,
                        default=ROOT / "data" / "synthetic_corpus.jsonl")
    args = parser.parse_args()
    rng = random.Random(args.seed)
    with args.out.open("w", encoding="utf-8") as f:
        for i in range(1, args.count + 1):
            f.write(json.dumps(make_article(rng, i)) + "\n")


if __name__ == "__main__":
    main()
