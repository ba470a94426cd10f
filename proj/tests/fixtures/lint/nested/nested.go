package nested

import (
	"reflect"
	"unsafe"
)

type Outer struct {
	inner struct {
		n uint
	}
	m int64
}

type Wide struct {
	a [4]uintptr
}

type Flat struct {
	a, b, c, d uintptr
}

type Foreign struct {
	h reflect.Value
}

func OuterToWide(o *Outer) *Wide {
	return (*Wide)(unsafe.Pointer(o))
}

func WideToFlat(w *Wide) *Flat {
	return (*Flat)(unsafe.Pointer(w))
}

func ForeignToFlat(f *Foreign) *Flat {
	return (*Flat)(unsafe.Pointer(f))
}

func Branches(b []byte, p uintptr, fresh bool) []byte {
	h := (*reflect.SliceHeader)(unsafe.Pointer(&b))
	if fresh {
		h = &reflect.SliceHeader{}
	}
	h.Data = p
	return b
}
