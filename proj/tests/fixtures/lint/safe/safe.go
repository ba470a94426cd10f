package safe

import (
	"reflect"
	"unsafe"
)

func BytesToString(b []byte) string {
	var s string
	h := (*reflect.StringHeader)(unsafe.Pointer(&s))
	h.Data = (*reflect.SliceHeader)(unsafe.Pointer(&b)).Data
	h.Len = len(b)
	return s
}

func Resize(b []byte, n int) []byte {
	h := (*reflect.SliceHeader)(unsafe.Pointer(&b))
	h.Len = n
	h.Cap = n
	return b
}

func Truncate(b []byte, n int) []byte {
	h := (*reflect.SliceHeader)(unsafe.Pointer(&b))
	if n < h.Len {
		h.Len = n
	}
	for i := 0; i < 2; i++ {
		h.Cap = h.Len
	}
	return b
}
