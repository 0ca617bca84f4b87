import csv
import io
import json
import math

import pytest

from periodlab.config import CurveConfig
from periodlab.conservative import AMPLITUDE, ENERGY, QUADRATURE, RETURN_MAP, PeriodCurve, Sample
from periodlab.criteria import classify
from periodlab.errors import InvalidReport
from periodlab.report import (CSV_HEADER, SCHEMA_VERSION, ReportDocument, build_report, curve_csv, dumps,
                              format_number, render_text, validate_document, write_json)
from periodlab.system import validate_system


@pytest.fixture(scope='module')
def damped_document():
    return build_report(classify(validate_system("x", "x"), curve_config=CurveConfig(n=4)))


def test_format_number():
    assert format_number(0.1) == '0.10000000000000001'
    assert float(format_number(math.pi)) == math.pi
    assert format_number(float('nan')) == 'null'
    assert format_number(float('inf')) == 'null'


def test_dumps_round_trips_doubles():
    values = [0.1, 1 / 3, 2 * math.pi, -1e-300, 6.02214076e23]
    text = dumps({'values': values, 'missing': None, 'bad': float('nan'), 'flag': True})
    document = json.loads(text)
    assert document['values'] == values
    assert document['missing'] is None and document['bad'] is None
    assert document['flag'] is True
    assert text.endswith('\n')


def test_document_matches_the_schema(damped_document):
    document = damped_document.to_dict()
    validate_document(document)
    assert document['schema_version'] == SCHEMA_VERSION
    assert document['system']['f'] == 'x'
    assert document['expansion']['Q'] == pytest.approx(-2 / 3)
    assert document['final']['conclusion'] == 'increasing'
    assert len(document['curve']) == 4
    assert len(document['verdicts']) == 12


def test_json_round_trip(damped_document):
    text = damped_document.to_json()
    restored = ReportDocument.from_json(text)
    assert restored.to_dict() == damped_document.to_dict()
    assert restored.to_json() == text


def test_invalid_documents_are_rejected(damped_document):
    with pytest.raises(InvalidReport):
        validate_document({'schema_version': '2'})
    document = damped_document.to_dict()
    document['final']['conclusion'] = 'maybe'
    with pytest.raises(InvalidReport):
        write_json(document, io.StringIO())


def test_write_json(damped_document):
    stream = io.StringIO()
    write_json(damped_document.to_dict(), stream)
    assert json.loads(stream.getvalue())['final']['agreement'] is True


def test_curve_csv():
    curve = PeriodCurve((Sample(0.1, 6.5), Sample(0.2, 6.75)), ENERGY, QUADRATURE, 1e-10)
    rows = list(csv.reader(io.StringIO(curve_csv(curve))))
    assert tuple(rows[0]) == CSV_HEADER
    assert rows[1:] == [['0.10000000000000001', '6.5', ''], ['0.20000000000000001', '6.75', '']]
    curve = PeriodCurve((Sample(0.1, 6.5, 1e-12), Sample(0.2, 6.75, -2e-12)), AMPLITUDE, RETURN_MAP, 1e-8)
    text = curve_csv(curve)
    assert '\r' not in text
    assert all(len(row) == 3 for row in csv.reader(io.StringIO(text)))
    assert float(text.splitlines()[2].split(',')[2]) == -2e-12


def test_render_text(damped_document):
    text = render_text(damped_document.to_dict())
    assert text.startswith("system: x'' + (x)x' + x = 0")
    assert "theorem1_Q" in text
    assert text.rstrip().endswith("conclusion: increasing (curve increasing, agreement yes)")
