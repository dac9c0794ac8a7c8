import os
from dotenv import load_dotenv

load_dotenv()


def _flag(name: str, default: bool) -> bool:
    value = os.environ.get(name)
    if value is None:
        return default
    return value.strip().lower() in ("1", "true", "yes", "on")


LOG_LEVEL = os.environ.get("LOG_LEVEL", "WARNING")
ANALYZER_JOBS = int(os.environ.get("ANALYZER_JOBS", 1))
ANALYZER_DEPTH = int(os.environ.get("ANALYZER_DEPTH", 1))
ANALYZER_STRUCTURED_LOGS = _flag("ANALYZER_STRUCTURED_LOGS", False)
ANALYZER_REDACT_EVIDENCE = _flag("ANALYZER_REDACT_EVIDENCE", True)
ANALYZER_CHECK_CLIENT_TRUSTED = _flag("ANALYZER_CHECK_CLIENT_TRUSTED", False)

REPORT_VERSION = "1.0"

# Minimum acceptable key size per asymmetric algorithm family (rule 15)
ASYMMETRIC_MIN_KEY_SIZE = {
    "RSA": 2048,
    "DSA": 2048,
    "DH": 2048,
    "DIFFIEHELLMAN": 2048,
    "EC": 224,
}

# Algorithms whose provider default key size is below the threshold
ASYMMETRIC_WEAK_DEFAULTS = {"RSA", "DSA", "DH", "DIFFIEHELLMAN"}

PBE_MIN_ITERATIONS = 1000

# API calls whose output is predictable (timestamps, device identifiers)
PREDICTABLE_SOURCES = {
    "<java.lang.System: long currentTimeMillis()>",
    "<java.lang.System: long nanoTime()>",
    "<java.util.Date: long getTime()>",
    "<android.telephony.TelephonyManager: java.lang.String getDeviceId()>",
}

# Collection APIs and the argument positions that carry an index or a size
COLLECTION_INDEX_APIS = {
    "<java.util.List: java.lang.Object get(int)>": (0,),
    "<java.util.List: java.lang.Object remove(int)>": (0,),
    "<java.util.List: void add(int,java.lang.Object)>": (0,),
    "<java.util.List: java.lang.Object set(int,java.lang.Object)>": (0,),
    "<java.util.ArrayList: java.lang.Object get(int)>": (0,),
    "<java.util.ArrayList: void <init>(int)>": (0,),
    "<java.util.HashMap: void <init>(int)>": (0,),
    "<java.util.HashSet: void <init>(int)>": (0,),
    "<java.util.Vector: java.lang.Object elementAt(int)>": (0,),
}

BLOCK_CIPHERS = {
    "AES", "DES", "DESEDE", "TRIPLEDES", "3DES", "BLOWFISH", "IDEA",
    "RC2", "RC5", "CAMELLIA", "SEED", "ARIA", "TWOFISH", "SKIPJACK",
}

INSECURE_SYMMETRIC = {"DES", "DESEDE", "3DES", "IDEA", "BLOWFISH", "RC4", "RC2"}

INSECURE_HASHES = {"MD2", "MD4", "MD5", "SHA-1", "SHA1"}
