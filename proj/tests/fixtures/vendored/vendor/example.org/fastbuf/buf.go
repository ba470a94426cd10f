package fastbuf

import "unsafe"

func String(b []byte) string {
	return *(*string)(unsafe.Pointer(&b))
}

func Size() uintptr { return unsafe.Sizeof(b) }

var b []byte
