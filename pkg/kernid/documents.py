"""Reading and writing design, parameter and dataset documents.

Documents are JSON or YAML, picked by file extension.  Matrices are
written as headerless CSV with every cell in shortest round-trip form, so
reading a matrix back gives the identical doubles.

"""
import csv
import io
import json
import logging
import math
import os

import numpy as np
import yaml
from yaml.error import YAMLError
from typing import IO, Any, Dict, List, Optional  # noqa

from kernid.design import Design, InvalidDesignError
from kernid.gpfit import Dataset
from kernid.kernels import (
    MixedKernelSpec, KernelFamily, RbfParams, PeriodicParams, RbfPeriodic,
    TwoRbf,
)
from kernid.utils import OSUtils, serialize_to_json


LOGGER = logging.getLogger(__name__)

Document = Dict[str, Any]

RBF_PERIODIC_KEYS = ('sigma', 'ell', 'tau', 's', 'p')
TWO_RBF_KEYS = ('sigma1', 'ell1', 'sigma2', 'ell2')


class DocumentError(ValueError):
    def __init__(self, filename, reason):
        # type: (str, str) -> None
        self.filename = filename
        self.reason = reason
        super(DocumentError, self).__init__(
            "Invalid document %s: %s" % (filename, reason))


class DocumentSerializer(object):
    file_extension = ''

    def serialize_document(self, contents):
        # type: (Document) -> str
        raise NotImplementedError('serialize_document')

    def load_document(self, file_contents, filename=''):
        # type: (str, str) -> Any
        raise NotImplementedError('load_document')


class JSONDocumentSerializer(DocumentSerializer):

    file_extension = 'json'

    def serialize_document(self, contents):
        # type: (Document) -> str
        return serialize_to_json(contents)

    def load_document(self, file_contents, filename=''):
        # type: (str, str) -> Any
        try:
            return json.loads(file_contents)
        except ValueError:
            raise DocumentError(filename, 'expected valid JSON')


class YAMLDocumentSerializer(DocumentSerializer):

    file_extension = 'yaml'

    @classmethod
    def is_yaml_document(cls, filename):
        # type: (str) -> bool
        file_extension = os.path.splitext(filename)[1].lower()
        return file_extension in [".yaml", ".yml"]

    def serialize_document(self, contents):
        # type: (Document) -> str
        return yaml.safe_dump(contents, allow_unicode=True,
                              default_flow_style=False, sort_keys=False)

    def load_document(self, file_contents, filename=''):
        # type: (str, str) -> Any
        try:
            return yaml.safe_load(file_contents)
        except YAMLError:
            raise DocumentError(filename, 'expected valid YAML')


def create_serializer(filename):
    # type: (str) -> DocumentSerializer
    if YAMLDocumentSerializer.is_yaml_document(filename):
        return YAMLDocumentSerializer()
    if os.path.splitext(filename)[1].lower() == '.json':
        return JSONDocumentSerializer()
    raise DocumentError(filename,
                        'unknown extension, use .json, .yaml or .yml')


def read_document(filename, osutils=None):
    # type: (str, Optional[OSUtils]) -> Document
    if osutils is None:
        osutils = OSUtils()
    serializer = create_serializer(filename)
    try:
        contents = osutils.get_file_contents(filename, binary=False)
    except (OSError, IOError) as e:
        raise DocumentError(filename, 'unable to read file (%s)' % e)
    doc = serializer.load_document(contents, filename)
    if not isinstance(doc, dict):
        raise DocumentError(filename, 'expected a mapping at the top level')
    return doc


def write_document(filename, doc, osutils=None):
    # type: (str, Document, Optional[OSUtils]) -> None
    if osutils is None:
        osutils = OSUtils()
    serializer = create_serializer(filename)
    osutils.makedirs(osutils.dirname(filename))
    osutils.set_file_contents(filename, serializer.serialize_document(doc),
                              binary=False)


def _number(value, name, filename):
    # type: (Any, str, str) -> float
    # YAML 1.1 reads 1e-9 (no dot) as a string, so numeric strings are
    # accepted.
    if isinstance(value, bool):
        raise DocumentError(filename, '%s must be a number' % name)
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise DocumentError(filename, '%s must be a number, got %r'
                            % (name, value))
    if not math.isfinite(number):
        raise DocumentError(filename, '%s must be finite' % name)
    return number


def _require(doc, key, filename):
    # type: (Document, str, str) -> Any
    if doc.get(key) is None:
        raise DocumentError(filename, 'missing required key "%s"' % key)
    return doc[key]


def _points(doc, filename):
    # type: (Document, str) -> List[List[float]]
    dim = _require(doc, 'dim', filename)
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise DocumentError(filename, 'dim must be a positive integer')
    raw = _require(doc, 'points', filename)
    if not isinstance(raw, list) or not raw:
        raise DocumentError(filename, 'points must be a non-empty list')
    points = []
    for i, row in enumerate(raw):
        if not isinstance(row, list):
            if dim != 1:
                raise DocumentError(
                    filename, 'point %s must list %s coordinates'
                    % (i, dim))
            row = [row]
        if len(row) != dim:
            raise DocumentError(
                filename, 'ragged rows: point %s has %s coordinates, '
                'expected %s' % (i, len(row), dim))
        points.append([_number(c, 'points[%s]' % i, filename)
                       for c in row])
    return points


def design_from_document(doc, filename=''):
    # type: (Document, str) -> Design
    points = _points(doc, filename)
    labels = doc.get('labels')
    if labels is not None:
        if not isinstance(labels, list):
            raise DocumentError(filename, 'labels must be a list')
        labels = tuple(str(label) for label in labels)
    try:
        return Design(dim=doc['dim'], points=points, labels=labels)
    except InvalidDesignError as e:
        raise DocumentError(filename, e.reason)


def spec_from_document(doc, filename=''):
    # type: (Document, str) -> MixedKernelSpec
    variant = _require(doc, 'variant', filename)
    try:
        family = KernelFamily(variant)
    except ValueError:
        raise DocumentError(
            filename, 'variant must be "rbf_periodic" or "two_rbf", '
            'got %r' % (variant,))
    keys = RBF_PERIODIC_KEYS
    if family is KernelFamily.TWO_RBF:
        keys = TWO_RBF_KEYS
    values = dict((key, _number(_require(doc, key, filename), key, filename))
                  for key in keys)
    noise_var = _number(doc.get('noise_var', 0.0), 'noise_var', filename)
    if family is KernelFamily.RBF_PERIODIC:
        return MixedKernelSpec(variant=RbfPeriodic(
            rbf=RbfParams(sigma=values['sigma'], ell=values['ell']),
            periodic=PeriodicParams(tau=values['tau'], s=values['s'],
                                    p=values['p'])),
            noise_var=noise_var)
    first = RbfParams(sigma=values['sigma1'], ell=values['ell1'])
    second = RbfParams(sigma=values['sigma2'], ell=values['ell2'])
    if second.ell < first.ell:
        LOGGER.warning("%s lists ell1=%r > ell2=%r, swapping the two RBF "
                       "components", filename or 'params', first.ell,
                       second.ell)
    return MixedKernelSpec(variant=TwoRbf.canonical(first, second),
                           noise_var=noise_var)


def dataset_from_document(doc, filename=''):
    # type: (Document, str) -> Dataset
    design = design_from_document(doc, filename)
    raw = _require(doc, 'responses', filename)
    if not isinstance(raw, list) or not raw:
        raise DocumentError(filename, 'responses must be a non-empty list')
    if isinstance(raw[0], list):
        if not all(isinstance(row, list) for row in raw):
            raise DocumentError(filename, 'ragged responses')
        responses = [[_number(v, 'responses', filename) for v in row]
                     for row in raw]  # type: Any
        if len(set(len(row) for row in responses)) != 1:
            raise DocumentError(filename, 'ragged responses')
    else:
        responses = [_number(v, 'responses', filename) for v in raw]
    try:
        return Dataset(design=design, responses=responses)
    except ValueError as e:
        raise DocumentError(filename, str(e))


def load_design(filename, osutils=None):
    # type: (str, Optional[OSUtils]) -> Design
    return design_from_document(read_document(filename, osutils), filename)


def load_params(filename, osutils=None):
    # type: (str, Optional[OSUtils]) -> MixedKernelSpec
    return spec_from_document(read_document(filename, osutils), filename)


def load_dataset(filename, osutils=None):
    # type: (str, Optional[OSUtils]) -> Dataset
    return dataset_from_document(read_document(filename, osutils), filename)


def dump_design(design):
    # type: (Design) -> Document
    if design.dim == 1:
        points = [p[0] for p in design.points]  # type: List[Any]
    else:
        points = [list(p) for p in design.points]
    doc = {'dim': design.dim, 'points': points}  # type: Document
    if design.labels is not None:
        doc['labels'] = list(design.labels)
    return doc


def dump_spec(spec):
    # type: (MixedKernelSpec) -> Document
    doc = {'variant': spec.family.value}  # type: Document
    for name, value in zip(spec.variant.param_names, spec.to_vector()):
        doc[name] = float(value)
    if spec.period is not None:
        doc['p'] = float(spec.period)
    doc['noise_var'] = float(spec.noise_var)
    return doc


def dump_dataset(dataset):
    # type: (Dataset) -> Document
    doc = dump_design(dataset.design)
    doc['responses'] = dataset.responses.tolist()
    return doc


def _write_matrix_rows(f, matrix):
    # type: (IO, Any) -> None
    writer = csv.writer(f)
    for row in np.atleast_2d(np.asarray(matrix, dtype=float)):
        writer.writerow([repr(float(v)) for v in row])


def write_matrix_csv(filename, matrix, osutils=None):
    # type: (str, Any, Optional[OSUtils]) -> None
    if osutils is None:
        osutils = OSUtils()
    osutils.makedirs(osutils.dirname(filename))
    with osutils.open_text(filename, 'w') as f:
        _write_matrix_rows(f, matrix)


def format_matrix_csv(matrix):
    # type: (Any) -> str
    buffer = io.StringIO()
    _write_matrix_rows(buffer, matrix)
    return buffer.getvalue()


def read_matrix_csv(filename, osutils=None):
    # type: (str, Optional[OSUtils]) -> np.ndarray
    if osutils is None:
        osutils = OSUtils()
    try:
        with osutils.open_text(filename, 'r') as f:
            rows = [row for row in csv.reader(f) if row]
    except (OSError, IOError) as e:
        raise DocumentError(filename, 'unable to read file (%s)' % e)
    if not rows:
        raise DocumentError(filename, 'empty matrix')
    if len(set(len(row) for row in rows)) != 1:
        raise DocumentError(filename, 'ragged rows')
    try:
        return np.array([[float(cell) for cell in row] for row in rows])
    except ValueError:
        raise DocumentError(filename, 'every cell must be a number')
