from dna_codec.constants import MappingMethod
from dna_codec.exceptions import DomainError


class MapperRegistry:
    _registry = {}

    @classmethod
    def register_mapper(cls, method: MappingMethod, mapper_class):
        cls._registry[method] = mapper_class

    @classmethod
    def create_mapper(cls, method: MappingMethod, table):
        mapper_class = cls._registry.get(MappingMethod(method))
        if mapper_class:
            return mapper_class(table)
        else:
            raise DomainError(f"Unknown mapping method {method}")
