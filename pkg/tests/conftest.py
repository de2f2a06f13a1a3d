import pytest

from tests.fixtures.codec_fixtures import (block11_params_fixture,
                                           bit_source_fixture,
                                           canonical_table_fixture,
                                           relaxed_constraints_fixture,
                                           whole_stream_params_fixture)
from tests.fixtures.corpus_fixtures import (poem_bits_fixture,
                                            poem_file_fixture)
