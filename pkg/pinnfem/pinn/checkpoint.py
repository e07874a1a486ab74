"""Plain-text network checkpoints.

Layout (UTF-8, LF)::

    PINNFEM-NET v1
    dim <d>
    layers <n0> <n1> ... <nk>
    activation tanh
    boundary <none|dirichlet_product>
    shift <float>
    W1
    <n1 lines of n0 floats>
    b1
    <one line of n1 floats>
    ...

Floats use the shortest decimal representation that round-trips.
"""

import math
from typing import Iterator, List, Tuple

import numpy as np

from pinnfem.errors import CheckpointFormatError, PinnFemError
from pinnfem.logger import logger
from pinnfem.network.dense import ACTIVATIONS, BOUNDARY_MODES, DenseNetwork, check_layer_sizes

MAGIC = "PINNFEM-NET v1"


def _format_row(values) -> str:
    return " ".join(repr(float(value)) for value in values)


def save_checkpoint(net: DenseNetwork, path: str) -> None:
    """Write ``net`` to ``path``."""
    lines = [
        MAGIC,
        f"dim {net.dim}",
        "layers " + " ".join(str(size) for size in net.layer_sizes),
        f"activation {net.activation}",
        f"boundary {net.boundary_mode}",
        f"shift {net.shift!r}",
    ]
    for layer, (weight, bias) in enumerate(zip(net.weights, net.biases), start=1):
        lines.append(f"W{layer}")
        lines.extend(_format_row(row) for row in weight.detach().numpy())
        lines.append(f"b{layer}")
        lines.append(_format_row(bias.detach().numpy()))
    with open(path, "w", encoding="utf-8", newline="\n") as out_file:
        out_file.write("\n".join(lines) + "\n")
    logger.debug("Checkpoint written to %s", path)


class _Lines:
    def __init__(self, text: str):
        self._lines: Iterator[Tuple[int, str]] = enumerate(text.split("\n"), start=1)
        self.number = 0

    def next(self, what: str) -> str:
        for number, line in self._lines:
            self.number = number
            return line.rstrip("\r")
        raise CheckpointFormatError(f"unexpected end of file, expected {what}", self.number + 1)

    def remaining(self) -> Iterator[Tuple[int, str]]:
        return self._lines

    def keyed(self, key: str) -> List[str]:
        fields = self.next(f"'{key}'").split()
        if not fields or fields[0] != key:
            raise CheckpointFormatError(f"expected '{key}'", self.number)
        return fields[1:]

    def floats(self, count: int, what: str) -> List[float]:
        fields = self.next(what).split()
        if len(fields) != count:
            raise CheckpointFormatError(
                f"expected {count} values for {what}, got {len(fields)}", self.number
            )
        try:
            values = [float(field) for field in fields]
        except ValueError as err:
            raise CheckpointFormatError(f"invalid number in {what}: {err}", self.number) from err
        if not all(math.isfinite(value) for value in values):
            raise CheckpointFormatError(f"non-finite value in {what}", self.number)
        return values


def _integers(fields: List[str], lines: _Lines, what: str) -> List[int]:
    try:
        return [int(field) for field in fields]
    except ValueError as err:
        raise CheckpointFormatError(f"invalid {what}: {err}", lines.number) from err


def parse_checkpoint(text: str) -> DenseNetwork:
    """Build a network from checkpoint text."""
    lines = _Lines(text)
    if lines.next("the header") != MAGIC:
        raise CheckpointFormatError(f"expected header '{MAGIC}'", lines.number)
    dim = _integers(lines.keyed("dim"), lines, "dimension")
    if len(dim) != 1:
        raise CheckpointFormatError("expected a single dimension", lines.number)
    sizes = _integers(lines.keyed("layers"), lines, "layer sizes")
    layers_line = lines.number
    try:
        sizes = list(check_layer_sizes(sizes))
    except PinnFemError as err:
        raise CheckpointFormatError(str(err), layers_line) from err
    if sizes[0] != dim[0]:
        raise CheckpointFormatError(f"input layer does not match dimension {dim[0]}", layers_line)
    activation = lines.keyed("activation")
    if len(activation) != 1 or activation[0] not in ACTIVATIONS:
        tag = " ".join(activation)
        raise CheckpointFormatError(f"unsupported activation '{tag}'", lines.number)
    boundary = lines.keyed("boundary")
    if len(boundary) != 1 or boundary[0] not in BOUNDARY_MODES:
        tag = " ".join(boundary)
        raise CheckpointFormatError(f"unknown boundary mode '{tag}'", lines.number)
    shift_fields = lines.keyed("shift")
    if len(shift_fields) != 1:
        raise CheckpointFormatError("malformed header field", lines.number)
    try:
        shift = float(shift_fields[0])
    except ValueError as err:
        raise CheckpointFormatError(f"invalid shift: {err}", lines.number) from err
    if not math.isfinite(shift):
        raise CheckpointFormatError("non-finite shift", lines.number)

    chunks = []
    for layer, (n_in, n_out) in enumerate(zip(sizes[:-1], sizes[1:]), start=1):
        lines.keyed(f"W{layer}")
        for row in range(n_out):
            chunks.append(lines.floats(n_in, f"row {row + 1} of W{layer}"))
        lines.keyed(f"b{layer}")
        chunks.append(lines.floats(n_out, f"b{layer}"))
    for number, line in lines.remaining():
        if line.strip():
            raise CheckpointFormatError("unexpected content after the last layer", number)

    parameters = np.array([value for chunk in chunks for value in chunk], dtype=np.float64)
    try:
        return DenseNetwork(
            sizes,
            parameters,
            activation=activation[0],
            boundary_mode=boundary[0],
            shift=shift,
        )
    except PinnFemError as err:
        raise CheckpointFormatError(str(err), layers_line) from err


def load_checkpoint(path: str) -> DenseNetwork:
    """Read a network written by :func:`save_checkpoint`."""
    with open(path, "r", encoding="utf-8") as in_file:
        net = parse_checkpoint(in_file.read())
    logger.debug("Checkpoint loaded from %s: %r", path, net)
    return net
