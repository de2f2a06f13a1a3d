from dna_codec.mapper.mapper import Mapper
from dna_codec.mapper.mapper_block11 import (Block11Mapper, map_block11,
                                             unmap_block11)
from dna_codec.mapper.mapper_whole_stream import (WholeStreamMapper,
                                                  map_whole_stream,
                                                  symbol_capacity_bits,
                                                  unmap_whole_stream)
