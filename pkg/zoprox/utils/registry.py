from zoprox.objects.errors import ConfigException, InternalZOProxException


class RegistryMeta(type):
    """Metaclass for classes that dispatch runs by an id string.

    Each ``@registers(id)`` method becomes a classmethod stored in ``entries``
    under its id, after whatever the bases registered. Calling the class runs
    the entry for the id given as the first argument::

        Solvers("zor_svrg", problem, config, x0, rng)

    Two methods claiming one id in the same class body is a bug in that class.
    """

    def __new__(mcs, name, bases, namespace):
        klass = super().__new__(mcs, name, bases, namespace)

        entries = {}
        for base in reversed(klass.__mro__[1:]):
            entries.update(getattr(base, "entries", {}))

        claimed = {}
        for attr, obj in namespace.items():
            run_id = getattr(getattr(obj, "__func__", None), "registered_as", None)
            if run_id is None:
                continue
            if run_id in claimed:
                raise InternalZOProxException(
                    f"{name}.{attr} and {name}.{claimed[run_id]} both register {run_id!r}")
            claimed[run_id] = attr
            entries[run_id] = getattr(klass, attr)

        klass.entries = entries
        return klass

    def __call__(cls, name, *args, **kwargs):
        return cls.lookup(name)(*args, **kwargs)


class Registry(metaclass=RegistryMeta):

    # what an entry is called in error messages and ConfigException fields
    kind = "entry"

    @classmethod
    def lookup(cls, name: str):
        """The bound entry for ``name``; unknown ids are a configuration error."""
        if name not in cls.entries:
            known = ", ".join(sorted(cls.entries))
            raise ConfigException(f"Unknown {cls.kind} {name!r}, expected one of: {known}",
                                  fields=(cls.kind,))
        return cls.entries[name]

    @classmethod
    def names(cls):
        return sorted(cls.entries)


def registers(run_id: str):
    """Register the decorated method under ``run_id``; it becomes a classmethod."""
    def deco(fn):
        fn.registered_as = run_id
        return classmethod(fn)
    return deco
