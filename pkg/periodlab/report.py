"""
Report documents of a classification, and their JSON, CSV and text renderings.

Floats are written with 17 significant digits so a document read back with json.loads reproduces every double
exactly. Non-finite values are written as null.
"""
import csv
import io
import json
import logging
import math
import re
from dataclasses import asdict, dataclass, field

import jsonschema

from .errors import InvalidReport

logger = logging.getLogger(__name__)

SCHEMA_VERSION = '1'
CSV_HEADER = ('param', 'T', 'phi')

_NUMBER = {'type': ['number', 'null']}
_CONCLUSION = {'enum': ['increasing', 'decreasing', 'isochronous_candidate', 'not_a_center', 'inconclusive']}

REPORT_SCHEMA = {
    '$schema': 'https://json-schema.org/draft/2020-12/schema',
    'title': 'periodlab classification report',
    'type': 'object',
    'required': ['schema_version', 'system', 'verdicts', 'expansion', 'curve', 'final'],
    'properties': {
        'schema_version': {'const': SCHEMA_VERSION},
        'system': {
            'type': 'object',
            'required': ['f', 'g', 'derivatives_at_0'],
            'properties': {
                'f': {'type': 'string'},
                'g': {'type': 'string'},
                'derivatives_at_0': {'type': 'object', 'additionalProperties': _NUMBER},
                'origin': {'type': 'string'},
                'is_conservative': {'type': 'boolean'},
                'corollary5_applicable': {'type': ['boolean', 'null']},
            },
        },
        'verdicts': {
            'type': 'array',
            'items': {
                'type': 'object',
                'required': ['name', 'witnesses', 'applicable', 'conclusion'],
                'properties': {
                    'name': {'type': 'string'},
                    'witnesses': {
                        'type': 'array',
                        'items': {'type': 'array', 'minItems': 2, 'maxItems': 2,
                                  'prefixItems': [{'type': ['number', 'string']}, _NUMBER]},
                    },
                    'applicable': {'type': 'boolean'},
                    'reason': {'type': 'string'},
                    'conclusion': _CONCLUSION,
                },
            },
        },
        'expansion': {
            'type': 'object',
            'required': ['T0', 'K', 'Q'],
            'properties': {'T0': _NUMBER, 'K': _NUMBER, 'Q': _NUMBER},
        },
        'center': {'type': 'object', 'additionalProperties': _NUMBER},
        'curve': {
            'type': 'array',
            'items': {'type': 'array', 'minItems': 3, 'maxItems': 3, 'items': _NUMBER},
        },
        'final': {
            'type': 'object',
            'required': ['conclusion', 'agreement'],
            'properties': {
                'conclusion': _CONCLUSION,
                'agreement': {'type': 'boolean'},
                'numeric_curve_verdict': {'type': 'string'},
            },
        },
        'notes': {'type': 'array', 'items': {'type': 'string'}},
    },
}


@dataclass
class ReportDocument:
    system: dict
    verdicts: list
    expansion: dict
    curve: list
    final: dict
    center: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    schema_version: str = SCHEMA_VERSION

    def to_dict(self):
        document = asdict(self)
        return {key: document[key] for key in ('schema_version', 'system', 'verdicts', 'expansion', 'center',
                                               'curve', 'final', 'notes')}

    @classmethod
    def from_dict(cls, document):
        validate_document(document)
        return cls(**document)

    def to_json(self):
        return dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def build_report(report):
    """
    ReportDocument of a ClassificationReport

    Args:
        report: ClassificationReport returned by criteria.classify

    Returns:
        ReportDocument

    """
    sys = report.system
    system = {
        'f': sys.f_text,
        'g': sys.g_text,
        'derivatives_at_0': sys.derivatives_at_0(),
        'origin': sys.origin,
        'is_conservative': sys.is_conservative,
        'corollary5_applicable': sys.corollary5_applicable,
    }
    verdicts = [{
        'name': v.name,
        'witnesses': [[x, value] for x, value in v.witness],
        'applicable': v.applicable,
        'reason': v.reason,
        'conclusion': v.conclusion,
    } for v in report.verdicts]
    expansion = dict(report.local_expansion, Q=report.Q)
    curve = [] if report.curve is None else [[s.param, s.T, s.phi] for s in report.curve.samples]
    final = {
        'conclusion': report.final_conclusion,
        'agreement': report.agreement,
        'numeric_curve_verdict': report.numeric_curve_verdict,
    }
    return ReportDocument(system, verdicts, expansion, curve, final, dict(report.center), list(report.notes))


def validate_document(document):
    """
    Raises:
        InvalidReport: the document does not match REPORT_SCHEMA

    """
    try:
        jsonschema.validate(instance=document, schema=REPORT_SCHEMA)
    except jsonschema.ValidationError as e:
        raise InvalidReport("report document does not match the schema: %s" % e.message)


# serialization

_MARK = '\x00float:'
_MARKED = re.compile(r'"\\u0000float:([^"]*)"')


def format_number(value):
    value = float(value)
    if not math.isfinite(value):
        return 'null'
    if value == 0:
        # -0.0 too, json reads "-0" back as the integer 0
        return '0'
    return format(value, '.17g')


def _mark_floats(obj):
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, float):
        return _MARK + format_number(obj)
    if isinstance(obj, dict):
        return {key: _mark_floats(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_mark_floats(value) for value in obj]
    if hasattr(obj, 'dtype'):
        return _mark_floats(obj.item())
    return obj


def dumps(document):
    """JSON text of a document, floats with 17 significant digits"""
    text = json.dumps(_mark_floats(document), indent=2, ensure_ascii=True)
    return _MARKED.sub(r'\1', text) + '\n'


def write_json(document, stream):
    validate_document(document)
    stream.write(dumps(document))


def write_csv(curve, stream):
    """
    period curve as CSV with the header param,T,phi; phi stays empty for quadrature samples
    """
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(CSV_HEADER)
    for s in curve.samples:
        writer.writerow([format_number(s.param), format_number(s.T),
                         '' if s.phi is None else format_number(s.phi)])


def curve_csv(curve):
    stream = io.StringIO()
    write_csv(curve, stream)
    return stream.getvalue()


def render_text(document):
    """human readable summary of a report document"""
    system = document['system']
    expansion = document['expansion']
    final = document['final']
    lines = ["system: x'' + (%s)x' + %s = 0" % (system['f'], system['g']),
             "T0 = %.12g, K = %.12g, Q = %.12g" % (expansion['T0'], expansion['K'], expansion['Q']), '']
    width = max((len(v['name']) for v in document['verdicts']), default=0)
    for v in document['verdicts']:
        status = v['conclusion'] if v['applicable'] else 'n/a'
        lines.append("%-*s  %-22s %s" % (width, v['name'], status, v.get('reason', '')))
    if document['curve']:
        lines += ['', "%-24s %-24s %s" % CSV_HEADER]
        for param, T, phi in document['curve']:
            lines.append("%-24.17g %-24.17g %s" % (param, T, '' if phi is None else '%.3g' % phi))
    for note in document.get('notes', []):
        lines.append("note: %s" % note)
    lines += ['', "conclusion: %s (curve %s, agreement %s)" % (
        final['conclusion'], final.get('numeric_curve_verdict'), 'yes' if final['agreement'] else 'no')]
    return '\n'.join(lines) + '\n'
