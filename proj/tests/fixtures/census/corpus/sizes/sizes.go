package sizes

import (
	"fmt"
	"unsafe"
)

type pair struct {
	a int32
	b uintptr
}

var width = unsafe.Sizeof(pair{})

func Report() {
	fmt.Println(unsafe.Offsetof(pair{}.b), unsafe.Alignof(width))
	if unsafe.Sizeof(width) > 4 {
		fmt.Println("wide")
	}
}
