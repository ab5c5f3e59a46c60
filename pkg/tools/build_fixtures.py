"""Rebuild the bundled fixture corpora from pinned translation catalogs.

The fixture text is taken from the gettext catalogs shipped inside three
wheels (Django, Sphinx, Weblate). Albanian and Italian come from the
translated ``msgstr`` entries, English from the ``msgid`` source strings of
the Albanian catalogs. Consecutive catalog entries are grouped into
article-like records with a short title and a longer body, written as
newline-delimited JSON to ``fixtures/articles.jsonl``. A small folder-layout
sample is written under ``fixtures/folders``.

Usage::

    python tools/build_fixtures.py [--wheel-dir DIR]

Requires ``polib`` (``pip install .[fixtures]``). The output is
deterministic for a given set of wheels.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import subprocess
import sys
import zipfile
from collections import defaultdict
from pathlib import Path

import polib

WHEELS = {
    "django": "Django==5.2.18",
    "sphinx": "Sphinx==8.1.3",
    "weblate": "Weblate==5.7.2",
}
LANGUAGES = ("sq", "en", "it")
SEED = 20170501
ROOT = Path(__file__).resolve().parent.parent

_PLACEHOLDER = re.compile(r"%\([^)]*\)[-#0 +]*\d*(?:\.\d+)?[sdifr]|%[sdifr]|\{[^{}]*\}")
_TAG = re.compile(r"<[^>]*>|&[a-z]+;|&#\d+;")
_URL = re.compile(r"\b(?:https?|ftp)://\S+|\bwww\.\S+")
_MARKUP = re.compile(r"[`*|]+")
_SPACE = re.compile(r"\s+")
_EMPTY_PAIR = re.compile(r"[“\"«‘'(\[]\s*[.,:;—-]?\s*[”\"»’')\]]")
_SPACE_BEFORE_PUNCT = re.compile(r"\s+([.,;:!?…])")


def fetch_wheels(wheel_dir: Path) -> None:
    wheel_dir.mkdir(parents=True, exist_ok=True)
    missing = [spec for name, spec in WHEELS.items() if not list(wheel_dir.glob(f"{name}-*.whl"))
               and not list(wheel_dir.glob(f"{name.capitalize()}-*.whl"))]
    if missing:
        subprocess.run(
            [sys.executable, "-m", "pip", "download", "--no-deps", "-d", str(wheel_dir), *missing],
            check=True,
        )


def clean(text: str) -> str:
    text = _URL.sub(" ", text)
    text = _TAG.sub(" ", text)
    text = _PLACEHOLDER.sub(" ", text)
    text = _MARKUP.sub(" ", text)
    text = text.replace("\\n", " ")
    previous = None
    while previous != text:
        previous = text
        text = _EMPTY_PAIR.sub(" ", text)
    text = _SPACE_BEFORE_PUNCT.sub(r"\1", _SPACE.sub(" ", text))
    text = text.strip(" :;,-—")
    return text


def _letters(text: str) -> int:
    return sum(ch.isalpha() for ch in text)


def catalog_strings(wheel: Path, language: str) -> list[tuple[str, str]]:
    """Return ``(domain, text)`` pairs in catalog order."""
    source_language = "sq" if language == "en" else language
    pattern = re.compile(rf"(.*)/locale/{source_language}/LC_MESSAGES/(\w+)\.po$")
    out = []
    with zipfile.ZipFile(wheel) as zf:
        for name in sorted(zf.namelist()):
            match = pattern.match(name)
            if not match:
                continue
            domain = _domain_for(match.group(1), match.group(2))
            catalog = polib.pofile(zf.read(name).decode("utf-8"))
            for entry in catalog:
                if entry.obsolete or "fuzzy" in entry.flags or not entry.translated():
                    continue
                source = entry.msgid
                translated = entry.msgstr or entry.msgstr_plural.get(0, "")
                text = source if language == "en" else translated
                if language != "en" and clean(translated) == clean(source):
                    continue
                out.append((domain, text))
    return out


def _domain_for(package_path: str, catalog: str) -> str:
    parts = package_path.split("/")
    if "contrib" in parts:
        return parts[parts.index("contrib") + 1]
    if parts[0] == "django":
        return "core"
    if parts[0] == "weblate":
        return "weblate-js" if catalog == "djangojs" else "weblate"
    return parts[0]


def _sentence(text: str) -> str:
    return text if text[-1] in ".!?…" else text + "."


def group_articles(strings: list[tuple[str, str]], language: str, source: str,
                   rng: random.Random) -> list[dict]:
    by_domain: dict[str, list[str]] = defaultdict(list)
    seen: set[str] = set()
    for domain, raw in strings:
        text = clean(raw)
        if _letters(text) < 3 or text.lower() in seen:
            continue
        seen.add(text.lower())
        by_domain[domain].append(text)

    articles = []
    for domain in sorted(by_domain):
        queue = by_domain[domain]
        i = 0
        while i < len(queue):
            title = None
            while i < len(queue):
                candidate = queue[i]
                i += 1
                if 15 <= len(candidate) <= 80 and " " in candidate:
                    title = candidate.rstrip(".")
                    break
            if title is None:
                break
            target = 300 + min(int(rng.expovariate(1 / 100)), 2400)
            body: list[str] = []
            length = 0
            while i < len(queue) and length < target:
                body.append(_sentence(queue[i]))
                length += len(queue[i]) + 1
                i += 1
            content = " ".join(body)
            if len(content) < 150:
                continue
            articles.append({
                "id": f"{language}-{source}-{domain}-{len(articles):04d}",
                "language": language,
                "title": title,
                "content": content,
                "domain": domain,
                "source": source,
            })
    return articles


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--wheel-dir", type=Path, default=Path("/tmp/fixture-wheels"))
    parser.add_argument("--out", type=Path, default=ROOT / "fixtures")
    args = parser.parse_args()

    fetch_wheels(args.wheel_dir)
    records = []
    for language in LANGUAGES:
        rng = random.Random(f"{SEED}:{language}")
        for source in WHEELS:
            wheel = next(p for p in sorted(args.wheel_dir.glob("*.whl")) if p.name.lower().startswith(source))
            strings = catalog_strings(wheel, language)
            records.extend(group_articles(strings, language, source, rng))

    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / "articles.jsonl", "w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")

    folders = args.out / "folders"
    for record in records:
        if record["source"] != "django" or record["domain"] not in ("admin", "auth", "core"):
            continue
        path = folders / record["language"] / record["domain"] / f"{record['id']}.txt"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(record["content"] + "\n", encoding="utf-8")

    counts: dict[str, list[int]] = defaultdict(list)
    for record in records:
        counts[record["language"]].append(len(record["content"].encode("utf-8")))
    for language, sizes in sorted(counts.items()):
        print(f"{language}\t{len(sizes)} articles\t{sum(sizes)} content bytes")


if __name__ == "__main__":
    main()
