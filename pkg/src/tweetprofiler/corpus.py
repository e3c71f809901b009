"""Corpus ingestion: per-author XML files plus ``id:::gender:::variety`` truth files.

Each author is one XML file whose root element carries a ``lang`` attribute
and contains one ``document`` element per tweet (either directly under the
root or wrapped in a ``documents`` element; both layouts are accepted).
The truth file has one line per author with three ``:::``-separated fields.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .errors import (
    ConsistencyError,
    CorpusParseError,
    CorpusSchemaError,
    DataError,
    LabelValueError,
    ParameterError,
    TruthFormatError,
)

LANGUAGES = ("ar", "en", "es", "pt")
GENDERS = ("female", "male")

TRUTH_DELIMITER = ":::"


@dataclass(frozen=True)
class AuthorRecord:
    """One author: id, language and the tweets extracted from their XML file."""

    author_id: str
    language: str
    tweets: tuple[str, ...]

    def __post_init__(self):
        if not self.author_id:
            raise ConsistencyError("author_id must be non-empty")

    @property
    def document(self) -> str:
        """All tweets concatenated into one document, space separated."""
        return concat_tweets(self)


@dataclass(frozen=True)
class TruthLabel:
    """Ground truth for one author: gender and language variety."""

    author_id: str
    gender: str
    variety: str


@dataclass(frozen=True)
class Corpus:
    """All authors of one language plus (optionally) their truth labels."""

    language: str
    authors: tuple[AuthorRecord, ...]
    labels: Mapping[str, TruthLabel] = field(default_factory=dict)

    def documents(self) -> list[str]:
        return [a.document for a in self.authors]

    def task_labels(self, task: str) -> list[str]:
        """Per-author labels for ``task`` ('gender' or 'variety'), in author order."""
        if task not in ("gender", "variety"):
            raise ParameterError(f"unknown task {task!r}")
        out = []
        for author in self.authors:
            label = self.labels.get(author.author_id)
            if label is None:
                raise ConsistencyError(
                    f"author {author.author_id!r} has no truth label"
                )
            out.append(label.gender if task == "gender" else label.variety)
        return out


def concat_tweets(record: AuthorRecord) -> str:
    """Join an author's tweets with single spaces into one document."""
    return " ".join(record.tweets)


def _byte_offset(path: Path, line: int, column: int) -> int:
    """Best-effort byte offset of (line, column) inside ``path``."""
    try:
        raw = path.read_bytes()
    except OSError:
        return 0
    lines = raw.split(b"\n")
    return sum(len(ln) + 1 for ln in lines[: line - 1]) + column


def parse_author_xml(path) -> AuthorRecord:
    """Parse one author XML file into an :class:`AuthorRecord`.

    The author id is the file name without its extension; tweets keep their
    document order and XML entities are decoded by the parser.
    """
    path = Path(path)
    try:
        tree = ET.parse(path)
    except ET.ParseError as exc:
        line, column = exc.position
        offset = _byte_offset(path, line, column)
        raise CorpusParseError(
            f"{path}: malformed XML at byte offset {offset} "
            f"(line {line}, column {column}): {exc.msg}"
        ) from exc
    except OSError as exc:
        raise DataError(f"{path}: {exc.strerror}") from exc

    root = tree.getroot()
    language = root.get("lang")
    if language is None:
        raise CorpusSchemaError(f"{path}: root element has no 'lang' attribute")
    if language not in LANGUAGES:
        raise CorpusSchemaError(
            f"{path}: unknown language {language!r}; expected one of {LANGUAGES}"
        )
    documents = root.findall(".//document")
    if not documents:
        raise CorpusSchemaError(f"{path}: no document elements")
    tweets = tuple("".join(node.itertext()) for node in documents)
    return AuthorRecord(author_id=path.stem, language=language, tweets=tweets)


def parse_truth_file(path) -> list[TruthLabel]:
    """Parse a truth file: one ``id:::gender:::variety`` line per author."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"{path}: {exc.strerror}") from exc

    labels = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        fields = line.split(TRUTH_DELIMITER)
        if len(fields) != 3:
            raise TruthFormatError(
                f"{path}: line {lineno}: expected 3 '{TRUTH_DELIMITER}'-separated "
                f"fields, got {len(fields)}"
            )
        author_id, gender, variety = (part.strip() for part in fields)
        if gender not in GENDERS:
            raise LabelValueError(
                f"{path}: line {lineno}: unknown gender {gender!r}"
            )
        if not author_id or not variety:
            raise TruthFormatError(f"{path}: line {lineno}: empty field")
        labels.append(TruthLabel(author_id=author_id, gender=gender, variety=variety))
    return labels


def load_corpus(directory, truth_path=None) -> Corpus:
    """Load all ``*.xml`` author files under ``directory``, optionally with labels.

    Authors are sorted by id so downstream matrices and folds do not depend on
    filesystem enumeration order. When ``truth_path`` is given, every author
    must be labeled and every label must match an author file.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise DataError(f"{directory}: not a directory")
    files = sorted(p for p in directory.iterdir() if p.suffix == ".xml")
    if not files:
        raise DataError(f"{directory}: no author XML files")

    records = sorted((parse_author_xml(p) for p in files), key=lambda r: r.author_id)
    seen: set[str] = set()
    for record in records:
        if record.author_id in seen:
            raise ConsistencyError(f"duplicate author id {record.author_id!r}")
        seen.add(record.author_id)
    languages = {r.language for r in records}
    if len(languages) > 1:
        raise ConsistencyError(
            f"{directory}: mixed languages in one corpus: {sorted(languages)}"
        )

    labels: dict[str, TruthLabel] = {}
    if truth_path is not None:
        for label in parse_truth_file(truth_path):
            if label.author_id not in seen:
                raise ConsistencyError(
                    f"truth entry {label.author_id!r} has no author XML file"
                )
            if label.author_id in labels:
                raise ConsistencyError(
                    f"duplicate truth entry for author {label.author_id!r}"
                )
            labels[label.author_id] = label
        unlabeled = seen - labels.keys()
        if unlabeled:
            raise ConsistencyError(
                f"authors without truth entry: {sorted(unlabeled)[:5]}"
            )
    return Corpus(language=records[0].language, authors=tuple(records), labels=labels)


def author_to_xml_bytes(record: AuthorRecord) -> bytes:
    """Serialize one author to XML bytes in the layout ``load_corpus`` reads.

    Note: tweets containing carriage returns do not round-trip because XML
    parsers normalize line endings.
    """
    root = ET.Element("author", {"lang": record.language})
    documents = ET.SubElement(root, "documents")
    for tweet in record.tweets:
        node = ET.SubElement(documents, "document")
        node.text = tweet
    tree = ET.ElementTree(root)
    ET.indent(tree)
    return ET.tostring(root, encoding="utf-8", xml_declaration=True)


def write_corpus(corpus: Corpus, directory, truth_path=None) -> None:
    """Write a corpus as one XML file per author plus an optional truth file."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for record in corpus.authors:
        (directory / f"{record.author_id}.xml").write_bytes(
            author_to_xml_bytes(record)
        )
    if truth_path is not None and corpus.labels:
        lines = []
        for record in corpus.authors:
            label = corpus.labels[record.author_id]
            lines.append(
                TRUTH_DELIMITER.join((label.author_id, label.gender, label.variety))
            )
        Path(truth_path).write_text("\n".join(lines) + "\n", encoding="utf-8")
