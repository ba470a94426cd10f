package kinds

import (
	"reflect"
	"unsafe"
)

type Ptr unsafe.Pointer

type View struct {
	Hdr  *reflect.SliceHeader
	Base unsafe.Pointer
}

func Make(b []byte) View {
	return View{
		Hdr:  (*reflect.SliceHeader)(unsafe.Pointer(&b)),
		Base: nil,
	}
}

func Walk(fn func(unsafe.Pointer)) {
	var local [4]uintptr
	for i := range local {
		fn(unsafe.Pointer(&local[i]))
	}
	go func(p unsafe.Pointer) {}(nil)
}
