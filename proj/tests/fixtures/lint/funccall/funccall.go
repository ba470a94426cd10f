package funccall

import (
	"reflect"
	"unsafe"
)

func header(b *[]byte) *reflect.SliceHeader {
	return (*reflect.SliceHeader)(unsafe.Pointer(b))
}

func Resize(b []byte, n int) []byte {
	h := header(&b)
	h.Len = n
	h.Cap = n
	return b
}
