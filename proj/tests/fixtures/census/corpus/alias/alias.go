package alias

import (
	r "reflect"
	u "unsafe"
)

type Header = r.SliceHeader

func Size() uintptr {
	return u.Sizeof(int64(0))
}

func Raw(b []byte) u.Pointer {
	return u.Pointer(&b[0])
}
