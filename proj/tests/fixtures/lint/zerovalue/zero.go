package zero

import (
	"reflect"
	"unsafe"
)

func FromPointer(p uintptr, n int) []byte {
	var h reflect.SliceHeader
	h.Data = p
	return *(*[]byte)(unsafe.Pointer(&h))
}
