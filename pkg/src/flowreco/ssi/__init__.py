from .wire import (
    FieldSchema,
    ParcelError,
    decode_parcel,
    default_value,
    encode_parcel,
)
from .interfaces import (
    DispatchFault,
    InterfaceDef,
    InterfaceDefError,
    MethodDef,
    Reply,
    ReplyStatus,
    ServiceDef,
    ServiceRegistry,
    Transaction,
    build_transaction,
    exception_reply,
    interface_from_json,
    interface_to_json,
    load_interface,
    ok_reply,
)
from .translate import (
    AdaptError,
    AUTO_PATTERNS,
    CALL_ID_REMAP,
    DiffReport,
    GenerationStats,
    MISSING_CALL,
    MISSING_SERVICE,
    MethodDiff,
    Override,
    OverrideError,
    PARCEL_REENCODE,
    SAME,
    SIGNATURE_ADAPT,
    TranslationPack,
    TranslationResult,
    Translator,
    diff_interfaces,
    generate_pack,
    save_pack_manifest,
    translate_reply,
    translate_transaction,
)
from .packfile import (
    load_overrides,
    override_from_json,
    overrides_from_json,
)
