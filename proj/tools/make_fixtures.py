#!/usr/bin/env python3
"""Regenerates the bundled fixtures under tests/fixtures and tests/data.

Output is deterministic: fixed RNG seeds and gzip mtime 0. Pseudo-words are
chosen so that the Porter stemmer maps them to themselves.
"""

import gzip
import io
import json
import random
from pathlib import Path

from nltk.stem.porter import PorterStemmer

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "tests" / "fixtures"
DATA = ROOT / "tests" / "data"

STEMMER = PorterStemmer(mode=PorterStemmer.MARTIN_EXTENSIONS)
STOPWORDS = set((ROOT / "data" / "stopwords" / "english.txt").read_text().split())

# surface form -> extra log10 slope per year after the event
TREATED = {"delve": 0.35, "meticulous": 0.25}
N_PSEUDO = 262
MONTHS = [(2018 + (11 + i) // 12, (11 + i) % 12 + 1) for i in range(66)]  # 2018-12 .. 2024-05
EVENT_INDEX = 47  # 2022-11
DOCS_PER_MONTH = 200


def pseudo_words(rng, n):
    consonants = "bcdfgklmnprstvz"
    vowels = "aeiou"
    out, seen = [], set()
    while len(out) < n:
        w = "".join(rng.choice(consonants if i % 2 == 0 else vowels) for i in range(5))
        if w in seen or w in STOPWORDS or STEMMER.stem(w) != w:
            continue
        seen.add(w)
        out.append(w)
    return sorted(out)


def write_corpus(rng, words):
    base = {w: rng.uniform(-1.6, -0.8) for w in words}
    slope = {w: rng.uniform(-0.05, 0.05) for w in words}
    for w in TREATED:
        base[w] = -1.3
        slope[w] = 0.0
    lines = []
    doc_id = 0
    for m, (year, month) in enumerate(MONTHS):
        t = m / 12.0
        post = max(0.0, t - EVENT_INDEX / 12.0)
        p = {w: 10 ** (base[w] + slope[w] * t + TREATED.get(w, 0.0) * post) for w in words}
        for _ in range(DOCS_PER_MONTH):
            present = [w for w in words if rng.random() < p[w]]
            present += rng.sample(["the", "and", "with", "for", "into", "about"], 2)
            rng.shuffle(present)
            text = " ".join(present)
            if rng.random() < 0.3:
                text = text.capitalize() + "."
            day = rng.randint(1, 28)
            lines.append({"id": f"doc{doc_id:06d}", "timestamp": f"{year:04d}-{month:02d}-{day:02d}",
                          "category": rng.choice(["talk", "podcast"]), "text": text})
            doc_id += 1
    # Records that ingest must count and drop without failing.
    lines.append({"id": "bad-ts", "timestamp": "2021-02-30", "text": "delve realm"})
    lines.append({"id": "early", "timestamp": "2017-06-01", "text": "delve realm"})
    lines.append({"id": "doc000000", "timestamp": "2019-01-05", "text": "duplicate identifier"})
    payload = "".join(json.dumps(r, sort_keys=True) + "\n" for r in lines).encode()
    buf = io.BytesIO()
    with gzip.GzipFile(filename="", mode="wb", fileobj=buf, mtime=0) as gz:
        gz.write(payload)
    (FIXTURES / "corpus.jsonl.gz").write_bytes(buf.getvalue())


def write_contrastive(rng, words):
    out = FIXTURES / "contrastive"
    out.mkdir(parents=True, exist_ok=True)
    boost = {"delve": 0.45, "meticulous": 0.3}
    for dataset in ("talks", "abstracts"):
        for model in ("m1", "m2"):
            human, edited = [], []
            for i in range(200):
                doc = [w for w in words if rng.random() < 0.06]
                human.append(" ".join(doc) if doc else "plain")
                ed = [w for w in doc if rng.random() > 0.05]
                for w, b in boost.items():
                    if rng.random() < b:
                        ed.append(w)
                if rng.random() < 0.1:
                    ed.append("clarity")
                rng.shuffle(ed)
                edited.append(" ".join(ed) if ed else "plain")
            # One failed edit (blank line) is dropped as a pair.
            edited[17] = ""
            stem = f"{dataset}__{model}__polish"
            (out / f"{stem}.human.txt").write_text("\n".join(human) + "\n")
            (out / f"{stem}.edited.txt").write_text("\n".join(edited) + "\n")


def write_embeddings(rng, words):
    dim = 16
    rows = []
    for w in words:
        v = [rng.gauss(0.0, 1.0) for _ in range(dim)]
        rows.append(w + " " + " ".join(f"{x:.6f}" for x in v))
    (FIXTURES / "embeddings.txt").write_text(f"{len(rows)} {dim}\n" + "\n".join(rows) + "\n")


def write_config():
    (FIXTURES / "config.txt").write_text(
        "# Pipeline run over the bundled fixtures.\n"
        "corpus = corpus.jsonl.gz\n"
        "contrastive_dir = contrastive\n"
        "embeddings = embeddings.txt\n"
        "stem_embedding_keys = true\n"
        "out_dir = out\n"
        "words = delv, meticul\n"
        "strategy = untreated\n"
        "pool_size = 20\n"
        "min_doc_count = 5\n"
        "n_samples = 500\n"
        "seed = 7\n"
    )
    (FIXTURES / "scenario.txt").write_text(
        "# Small simulated panel for the simulate subcommand.\n"
        "n_months_pre = 48\n"
        "n_months_post = 18\n"
        "docs_per_month = 50000\n"
        "n_treated = 1\n"
        "n_null = 40\n"
        "treated_delta = 0.15\n"
        "noise_sd = 0.05\n"
    )


def write_contrastive_mini(rng):
    out = DATA / "contrastive_mini"
    out.mkdir(parents=True, exist_ok=True)
    vocab = ["delv", "realm", "intric", "tapestri", "show", "meticul", "talk", "work", "idea", "plan", "boast", "crucial"]
    lean = {"delv": 0.7, "tapestri": 0.5, "intric": 0.4, "meticul": 0.5}
    for cell in ("d1__m1__p1", "d2__m1__p1"):
        human, edited = [], []
        for _ in range(10):
            h = [w for w in vocab if rng.random() < 0.3]
            e = [w for w in vocab if rng.random() < lean.get(w, 0.3)]
            human.append(" ".join(h) if h else "work")
            edited.append(" ".join(e) if e else "work")
        (out / f"{cell}.human.txt").write_text("\n".join(human) + "\n")
        (out / f"{cell}.edited.txt").write_text("\n".join(edited) + "\n")


def main():
    FIXTURES.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20221130)
    words = pseudo_words(rng, N_PSEUDO) + sorted(TREATED)
    write_corpus(random.Random(1), words)
    write_contrastive(random.Random(2), words)
    write_embeddings(random.Random(3), words)
    write_config()
    write_contrastive_mini(random.Random(4))


if __name__ == "__main__":
    main()
