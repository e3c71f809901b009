"""Versioned text format for trained profile models.

One file bundles the shared vocabulary, the gender model and the variety
model together with the configuration that produced them, so predictions are
always made against the exact vocabulary the models were trained on. Floats
are written with ``repr`` (shortest round-trip form), so load followed by
save reproduces the file byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .errors import ModelFormatError
from .svm import BinaryRbfSvm, RbfSvmClassifier
from .vectorizer import Vocabulary, vocabulary_from_lines, vocabulary_to_lines

FORMAT_NAME = "tweetprofiler-model"
FORMAT_VERSION = 1


@dataclass
class ProfileModel:
    """A trained gender + variety classifier pair and its shared vocabulary."""

    language: str
    min_df: int
    C: float
    gamma: object  # 'auto' or float, as configured
    lowercase: bool
    vocabulary: Vocabulary
    gender: RbfSvmClassifier
    variety: RbfSvmClassifier


def _gamma_token(gamma) -> str:
    return "auto" if gamma == "auto" else repr(float(gamma))


def _parse_gamma(token: str):
    return "auto" if token == "auto" else float(token)


def _sv_row_tokens(matrix: sp.csr_matrix, row: int) -> str:
    start, end = matrix.indptr[row], matrix.indptr[row + 1]
    pairs = []
    for column, value in zip(matrix.indices[start:end], matrix.data[start:end]):
        count = int(value)
        if count != value:
            raise ModelFormatError("support vector counts must be integers")
        pairs.append(f"{column}:{count}")
    return " ".join(pairs)


def _machine_lines(machine: BinaryRbfSvm, class_index: dict) -> list[str]:
    first, second = machine.label_pair_
    lines = [
        f"machine {class_index[first]} {class_index[second]}",
        f"gamma_value {float(machine.gamma_)!r}",
        f"bias {float(machine.intercept_)!r}",
        f"converged {int(machine.converged_)}",
        f"nsv {machine.support_vectors_.shape[0]}",
    ]
    for row, coef in enumerate(machine.dual_coef_):
        tokens = _sv_row_tokens(machine.support_vectors_, row)
        lines.append(f"{float(coef)!r} {tokens}".rstrip())
    return lines


def _classifier_lines(task: str, clf: RbfSvmClassifier) -> list[str]:
    classes = list(clf.classes_)
    class_index = {cls: idx for idx, cls in enumerate(classes)}
    lines = [f"task {task}", f"classes {len(classes)}"]
    lines.extend(str(cls) for cls in classes)
    lines.append(f"machines {len(clf.machines_)}")
    for machine in clf.machines_:
        lines.extend(_machine_lines(machine, class_index))
    return lines


def model_to_text(model: ProfileModel) -> str:
    lines = [
        f"{FORMAT_NAME} {FORMAT_VERSION}",
        f"language {model.language}",
        f"min_df {model.min_df}",
        f"c {float(model.C)!r}",
        f"gamma {_gamma_token(model.gamma)}",
        f"lowercase {int(model.lowercase)}",
        f"vocabulary {len(model.vocabulary)}",
    ]
    lines.extend(vocabulary_to_lines(model.vocabulary))
    lines.extend(_classifier_lines("gender", model.gender))
    lines.extend(_classifier_lines("variety", model.variety))
    lines.append("end")
    return "\n".join(lines) + "\n"


def save_model(model: ProfileModel, path) -> None:
    Path(path).write_text(model_to_text(model), encoding="utf-8", newline="\n")


class _Reader:
    def __init__(self, lines: list[str]):
        self.lines = lines
        self.pos = 0

    def next(self) -> str:
        if self.pos >= len(self.lines):
            raise ModelFormatError("unexpected end of model file")
        line = self.lines[self.pos]
        self.pos += 1
        return line

    def expect(self, keyword: str) -> list[str]:
        line = self.next()
        parts = line.split(" ")
        if parts[0] != keyword:
            raise ModelFormatError(
                f"line {self.pos}: expected {keyword!r}, got {parts[0]!r}"
            )
        return parts[1:]


def _read_machine(
    reader: _Reader, classes: list[str], n_features: int, C: float, gamma
) -> BinaryRbfSvm:
    pair = reader.expect("machine")
    try:
        first, second = classes[int(pair[0])], classes[int(pair[1])]
    except (IndexError, ValueError) as exc:
        raise ModelFormatError(f"line {reader.pos}: bad machine header") from exc
    gamma_value = float(reader.expect("gamma_value")[0])
    bias = float(reader.expect("bias")[0])
    converged = bool(int(reader.expect("converged")[0]))
    n_sv = int(reader.expect("nsv")[0])
    if n_sv < 1:
        raise ModelFormatError(f"line {reader.pos}: machine without support vectors")

    coefs = []
    indptr = [0]
    indices: list[int] = []
    data: list[int] = []
    for _ in range(n_sv):
        parts = reader.next().split(" ")
        coefs.append(float(parts[0]))
        for token in parts[1:]:
            column_text, count_text = token.split(":")
            column = int(column_text)
            if column >= n_features:
                raise ModelFormatError(
                    f"line {reader.pos}: column {column} outside vocabulary"
                )
            indices.append(column)
            data.append(int(count_text))
        indptr.append(len(indices))

    machine = BinaryRbfSvm(C=C, gamma=gamma)
    machine.label_pair_ = (first, second)
    machine.classes_ = np.asarray([first, second], dtype=object)
    machine.gamma_ = gamma_value
    machine.support_vectors_ = sp.csr_matrix(
        (
            np.asarray(data, dtype=np.float64),
            np.asarray(indices, dtype=np.int32),
            np.asarray(indptr, dtype=np.int32),
        ),
        shape=(n_sv, n_features),
    )
    machine.support_ = np.arange(n_sv)
    machine.dual_coef_ = np.asarray(coefs, dtype=np.float64)
    machine.intercept_ = bias
    machine.converged_ = converged
    machine.n_iter_ = 0
    machine.n_features_in_ = n_features
    return machine


def _read_classifier(
    reader: _Reader, task: str, n_features: int, C: float, gamma
) -> RbfSvmClassifier:
    header = reader.expect("task")
    if header[0] != task:
        raise ModelFormatError(
            f"line {reader.pos}: expected task {task!r}, got {header[0]!r}"
        )
    n_classes = int(reader.expect("classes")[0])
    classes = [reader.next() for _ in range(n_classes)]
    n_machines = int(reader.expect("machines")[0])
    expected = n_classes * (n_classes - 1) // 2
    if n_machines != expected:
        raise ModelFormatError(
            f"task {task}: {n_classes} classes need {expected} machines, "
            f"file has {n_machines}"
        )
    clf = RbfSvmClassifier(C=C, gamma=gamma)
    clf.classes_ = np.asarray(classes, dtype=object)
    clf.machines_ = [
        _read_machine(reader, classes, n_features, C, gamma)
        for _ in range(n_machines)
    ]
    clf.class_pairs_ = [machine.label_pair_ for machine in clf.machines_]
    clf.converged_ = all(machine.converged_ for machine in clf.machines_)
    clf.n_features_in_ = n_features
    return clf


def model_from_text(text: str) -> ProfileModel:
    reader = _Reader(text.splitlines())
    header = reader.next().split(" ")
    if header[0] != FORMAT_NAME:
        raise ModelFormatError(f"not a {FORMAT_NAME} file")
    if header[1] != str(FORMAT_VERSION):
        raise ModelFormatError(f"unsupported model format version {header[1]}")
    language = reader.expect("language")[0]
    min_df = int(reader.expect("min_df")[0])
    C = float(reader.expect("c")[0])
    gamma = _parse_gamma(reader.expect("gamma")[0])
    lowercase = bool(int(reader.expect("lowercase")[0]))
    n_terms = int(reader.expect("vocabulary")[0])
    vocab_lines = [reader.next() for _ in range(n_terms + 1)]  # min_df header + terms
    vocabulary = vocabulary_from_lines(vocab_lines)
    if len(vocabulary) != n_terms:
        raise ModelFormatError("vocabulary length does not match its header")

    gender = _read_classifier(reader, "gender", n_terms, C, gamma)
    variety = _read_classifier(reader, "variety", n_terms, C, gamma)
    if reader.next() != "end":
        raise ModelFormatError("missing 'end' marker")
    return ProfileModel(
        language=language,
        min_df=min_df,
        C=C,
        gamma=gamma,
        lowercase=lowercase,
        vocabulary=vocabulary,
        gender=gender,
        variety=variety,
    )


def load_model(path) -> ProfileModel:
    return model_from_text(Path(path).read_text(encoding="utf-8"))
