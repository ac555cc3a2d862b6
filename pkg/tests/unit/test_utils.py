import json
import os
from io import StringIO

from hypothesis import given
from hypothesis.strategies import floats, lists

from kernid import utils


class TestUI(object):
    def setup_method(self):
        self.out = StringIO()
        self.ui = utils.UI(self.out)

    def test_write_goes_to_out_obj(self):
        self.ui.write("Foo")
        assert self.out.getvalue() == 'Foo'

    def test_write_adds_no_newline(self):
        self.ui.write("a")
        self.ui.write("b\n")
        assert self.out.getvalue() == 'ab\n'


class TestOSUtils(object):
    def test_text_round_trip(self, tmpdir):
        osutils = utils.OSUtils()
        filename = str(tmpdir.join('out.txt'))
        osutils.set_file_contents(filename, u'sigma', binary=False)
        assert osutils.file_exists(filename)
        assert osutils.get_file_contents(filename, binary=False) == 'sigma'
        assert osutils.get_file_contents(filename) == b'sigma'

    def test_makedirs_is_idempotent(self, tmpdir):
        osutils = utils.OSUtils()
        path = str(tmpdir.join('a', 'b'))
        osutils.makedirs(path)
        osutils.makedirs(path)
        osutils.makedirs('')
        assert os.path.isdir(path)

    def test_open_text_keeps_line_endings(self, tmpdir):
        osutils = utils.OSUtils()
        filename = str(tmpdir.join('rows.csv'))
        with osutils.open_text(filename, 'w') as f:
            f.write(u'1,2\r\n')
        with open(filename, 'rb') as f:
            assert f.read() == b'1,2\r\n'


def test_serialize_json():
    assert utils.serialize_to_json({'foo': 'bar'}) == (
        '{\n'
        '  "foo": "bar"\n'
        '}\n'
    )


@given(values=lists(floats(allow_nan=False, allow_infinity=False)))
def test_serialized_floats_parse_back_exactly(values):
    assert json.loads(utils.serialize_to_json(values)) == values
